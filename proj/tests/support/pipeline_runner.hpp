#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "apisum/pipeline.hpp"
#include "test_util.hpp"

namespace apisum::testing {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

inline CliResult run(std::vector<std::string> args) {
    args.insert(args.begin(), "apisum");
    std::ostringstream out;
    std::ostringstream err;
    CliResult r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

inline std::string fixture_path(const std::string& name) { return (data_dir() / "fixture" / name).string(); }
inline std::string golden_path(const std::string& name) { return (data_dir() / "golden" / name).string(); }

/// Runs ingest, extract and corpus on the bundled dump into `store`.
inline std::vector<CliResult> build_fixture_store(const std::filesystem::path& store,
                                                  const std::vector<std::string>& extra = {}) {
    std::vector<CliResult> results;
    for (const std::string stage : {"ingest", "extract", "corpus"}) {
        std::vector<std::string> args = {stage, "--store-dir", store.string(), "--dump_path", fixture_path("dump.jsonl"),
                                         "--source", "dump"};
        args.insert(args.end(), extra.begin(), extra.end());
        results.push_back(run(args));
        if (results.back().code != 0) break;
    }
    return results;
}

}  // namespace apisum::testing
