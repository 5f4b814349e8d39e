// Command-line driver for the conceft shared library. All functionality is
// reached through the C API in conceft/conceft.h; the CLI only parses
// arguments and maps statuses to exit codes (0 ok, 2 config, 3 numeric,
// 4 I/O).
#include <conceft/conceft.h>

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"ConceFT multi-taper synchrosqueezing pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;

    const std::vector<std::string> commands = {"simulate", "analyze", "evaluate", "sweep", "render"};
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "Path to the run config")->required();
        sub->add_option("--out", out_dir, "Output directory (overrides [output] dir)");
        sub->add_option("--seed", seed, "Master seed override")->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--threads", threads, "Worker threads (0 = auto, CONCEFT_THREADS honored)");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    const cft_status status = cft_run(command.c_str(), config_path.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                                      seed_set ? &seed : nullptr, threads);
    if (status != CFT_OK) {
        std::fprintf(stderr, "error: %s\n", cft_last_error());
        return static_cast<int>(status) == 1 ? 2 : static_cast<int>(status);
    }
    return 0;
}
