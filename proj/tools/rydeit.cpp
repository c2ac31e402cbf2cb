// rydeit - command-line front end.
//
// Exit codes: 0 success, 1 runtime error or failed validation, 2 usage error.

#include <iostream>

#include "rydeit/cli.hpp"

int main(int argc, char** argv) {
    using namespace rydeit;
    RunManifest manifest;
    try {
        manifest = parse_cli(argc, argv);
    } catch (const HelpRequested& help) {
        std::cout << help.text;
        return 0;
    } catch (const Error& e) {
        std::cerr << "rydeit: " << e.what() << "\n";
        const ErrorCode c = e.code();
        const bool usage = c == ErrorCode::UnknownFlag || c == ErrorCode::MissingConfig ||
                           c == ErrorCode::BadOverride;
        return usage ? 2 : 1;
    }

    try {
        const RunResult result = execute(manifest);
        write_results(result, manifest, manifest.out);
        if (!run_succeeded(result)) {
            std::cerr << "rydeit: validation checks failed\n";
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "rydeit: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
