#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "argsem/analysis.hpp"
#include "argsem/intrinsic.hpp"
#include "argsem/metrics.hpp"

namespace argsem {

inline constexpr int kReportSchemaVersion = 1;

// sections of the key-value experiment manifest
struct KvSection {
    std::string type;  // output | settings | dataset | space | classifier | analysis
    std::string name;  // empty for output/settings
    std::map<std::string, std::string> kv;
    size_t line = 0;
};

struct Manifest {
    std::string path;
    std::string base_dir;  // relative paths resolve against the manifest's directory
    std::vector<KvSection> sections;
    std::string text;  // raw content, hashed into reports
};

// syntax errors throw; semantic problems are reported by validate_manifest
Manifest parse_manifest(const std::string& path);

// returns every validation failure at once, each naming the section/field
std::vector<std::string> validate_manifest(const Manifest& m);

// executes prepare -> spaces -> classifiers x runs -> analyses, writing one
// JSON report per stage plus summary.json under the output directory.
// exit status: 0 ok, 1 validation error, 2 runtime failure.
int run_manifest(const Manifest& m, std::ostream& log);

// JSON fragments shared by the manifest runner and the CLI subcommands
nlohmann::json eval_report_json(const EvalReport& r);
nlohmann::json grid_result_json(const GridResult& g);
nlohmann::json cross_matrix_json(const CrossTrainMatrix& m);
nlohmann::json bow_report_json(const BowReport& r);

void write_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace argsem
