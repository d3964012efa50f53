#pragma once

#include <optional>
#include <string>

#include "mqv/instance.hpp"

namespace mqv {

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<long> prime;
    bool first_order = false;
    bool with_timings = false;       // off by default: reports stay byte-identical
    std::optional<std::string> expr; // `identities --expr`, normalized into the report
};

struct RunResult {
    int exit_code = 0; // 0 pass, 1 check failure, 2 usage/parse, 3 resource bound
    std::string report_json;
};

/// Commands: validate | identities | sample | check | stability | ext | verify-all.
RunResult run_command(const std::string& command, const std::string& instance_text,
                      const RunOptions& opts = {});

} // namespace mqv
