#include "projected_descent.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace utilscal::detail {

namespace {
constexpr double kMinSpectral = 1e-30;
constexpr double kMaxSpectral = 1e30;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;
constexpr std::size_t kMemory = 10;
}  // namespace

DescentResult minimize_projected(const std::function<double(const Vector&)>& value,
                                 const std::function<Vector(const Vector&)>& gradient, const FeasibleSet& set,
                                 const Vector& start, int max_iterations, double tol)
{
    DescentResult out;
    Vector x = set.project(start);
    double fx = value(x);
    Vector g = gradient(x);

    const Vector first = set.project(x - g) - x;
    const double first_norm = first.lpNorm<Eigen::Infinity>();
    double spectral = first_norm > 0.0 ? std::clamp(1.0 / first_norm, kMinSpectral, kMaxSpectral) : 1.0;

    // Nonmonotone acceptance against the worst of the last kMemory values;
    // BB steps lose most of their speed under a monotone test.
    std::deque<double> recent{fx};
    for (int k = 0; k < max_iterations; ++k) {
        out.iterations = k;
        if ((set.project(x - g) - x).norm() <= tol * (1.0 + x.norm())) {
            out.converged = true;
            break;
        }
        const Vector d = set.project(x - spectral * g) - x;
        const double slope = g.dot(d);
        if (!(slope < 0.0)) {
            out.converged = true;
            break;
        }
        const double reference = *std::max_element(recent.begin(), recent.end());
        double t = 1.0;
        Vector trial;
        double f_trial = fx;
        bool accepted = false;
        for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
            trial = x + t * d;
            f_trial = value(trial);
            if (f_trial <= reference + kArmijo * t * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;

        const Vector g_next = gradient(trial);
        const Vector s = trial - x;
        const Vector y = g_next - g;
        const double sy = s.dot(y);
        spectral = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, kMinSpectral, kMaxSpectral) : kMaxSpectral;
        x = trial;
        fx = f_trial;
        recent.push_back(fx);
        if (recent.size() > kMemory) recent.pop_front();
        g = g_next;
        out.iterations = k + 1;
    }
    if (!out.converged && (set.project(x - g) - x).norm() <= tol * (1.0 + x.norm())) out.converged = true;
    out.x = std::move(x);
    return out;
}

}  // namespace utilscal::detail
