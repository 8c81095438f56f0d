#include "commands.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv)
{
    auto logger = spdlog::stderr_color_mt("utilscal");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("UTILSCAL_LOG")) spdlog::set_level(spdlog::level::from_str(level));
    return utilscal::cli::run_cli(argc, argv, std::cout, std::cerr);
}
