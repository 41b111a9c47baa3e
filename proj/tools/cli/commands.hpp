#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"

namespace hofbauer::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kDependencyError = 3, kCheckFailure = 4 };

/// A prerequisite artifact is missing or belongs to another config.
class DependencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunContext {
    RunConfig cfg;
    std::string config_json; // canonical
    std::string config_hash; // sha1 of config_json
    std::filesystem::path out;
    int threads = 1;
};

RunContext make_context(RunConfig cfg, const std::string& out_override, int threads);

const std::vector<std::string>& command_names();

/// Runs one command and writes its outputs plus manifest_<command>.json.
/// Returns kOk or kCheckFailure; throws ConfigError / DependencyError.
int run_command(const std::string& command, const RunContext& ctx);

std::string sha1_hex(const std::string& data);
/// sha1 of "blob <size>\0" + data, as computed by git hash-object.
std::string git_blob_sha1(const std::string& data);

} // namespace hofbauer::cli
