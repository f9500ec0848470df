#include "argsem/manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "argsem/bilstm.hpp"
#include "argsem/linear.hpp"
#include "argsem/sgns.hpp"
#include "argsem/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace argsem {

// ---------------------------------------------------------------- parsing

Manifest parse_manifest(const std::string& path) {
    if (!file_exists(path)) throw std::runtime_error("manifest not found: " + path);
    Manifest m;
    m.path = path;
    m.base_dir = fs::path(path).parent_path().string();
    if (m.base_dir.empty()) m.base_dir = ".";
    m.text = read_file(path);

    KvSection* current = nullptr;
    size_t line_no = 0;
    for (const auto& raw : read_lines(path)) {
        ++line_no;
        std::string line = strip(raw);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                         ": unterminated section header");
            auto inner = split_ws(line.substr(1, line.size() - 2));
            if (inner.empty() || inner.size() > 2)
                throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                         ": section header must be [type] or [type name]");
            KvSection s;
            s.type = inner[0];
            if (inner.size() == 2) s.name = inner[1];
            s.line = line_no;
            m.sections.push_back(std::move(s));
            current = &m.sections.back();
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        if (!current)
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": key outside any section");
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": empty key");
        if (!current->kv.emplace(key, value).second)
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": duplicate key '" +
                                     key + "' in section [" + current->type + " " + current->name + "]");
    }
    return m;
}

// ------------------------------------------------------------------ plan

namespace {

struct DatasetSpec {
    std::string name;
    std::string path;
    DatasetFormat format = DatasetFormat::Tsv;
    bool undersample = false;
    uint64_t seed = 1;
};

struct SpaceSpec {
    enum class Kind { Load, Sgns, Random };
    std::string name;
    Kind kind = Kind::Load;
    std::string path;         // load
    std::string corpus;       // sgns
    std::string family;       // sgns: network | association | corpus
    SgnsConfig sgns;          // sgns (+ dim/seed shared with random)
    bool grid = false;        // sgns: run the full four-parameter grid
    std::string similarity;   // grid benchmarks
    std::string relatedness;
    std::string vocab_file;     // random
    std::string vocab_dataset;  // random
};

struct ClassifierSpec {
    std::string name;
    std::string type;  // bilstm | linear
    std::string dataset;
    std::string space;  // bilstm only
    ClassifierConfig cfg;
    std::optional<double> lambda;  // linear; nullopt = dev-selected
    int linear_epochs = 5;
    int runs = 10;
};

struct AnalysisSpec {
    std::string name;
    std::string type;  // profile | cross-train | bow | ensemble
    std::string classifier;
    std::vector<std::string> datasets;
    std::vector<double> fractions;
    size_t k = 100;
    std::string function_words;
    std::vector<std::string> members;  // classifier:<name> | file:<path>
    std::string weights;               // none | dev-f1 | comma floats
    std::string gold;
    int epochs = 5;  // bow linear epochs
    uint64_t seed = 1;
};

struct Plan {
    std::string output_dir;
    uint64_t seed = 1;
    int threads = 1;
    int default_runs = 10;
    std::vector<DatasetSpec> datasets;
    std::vector<SpaceSpec> spaces;
    std::vector<ClassifierSpec> classifiers;
    std::vector<AnalysisSpec> analyses;
};

class PlanBuilder {
public:
    PlanBuilder(const Manifest& m) : m_(m) {}

    Plan build(std::vector<std::string>& errors) {
        for (const auto& s : m_.sections) {
            ctx_ = "[" + s.type + (s.name.empty() ? "" : " " + s.name) + "]";
            if (s.type == "output") parse_output(s);
            else if (s.type == "settings") parse_settings(s);
            else if (s.type == "dataset") parse_dataset(s);
            else if (s.type == "space") parse_space(s);
            else if (s.type == "classifier") parse_classifier(s);
            else if (s.type == "analysis") parse_analysis(s);
            else err("unknown section type '" + s.type + "'");
        }
        if (plan_.output_dir.empty()) err("[output].dir: missing output directory");
        cross_checks();
        errors = errors_;
        return plan_;
    }

private:
    const Manifest& m_;
    Plan plan_;
    std::vector<std::string> errors_;
    std::string ctx_;
    std::set<std::string> known_keys_;

    void err(const std::string& msg) { errors_.push_back(ctx_ + " " + msg); }

    std::string resolve(const std::string& p) const {
        fs::path fp(p);
        if (fp.is_absolute()) return p;
        return (fs::path(m_.base_dir) / fp).lexically_normal().string();
    }

    void check_known(const KvSection& s, std::initializer_list<const char*> keys) {
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [k, v] : s.kv)
            if (!allowed.count(k)) err(k + ": unknown key");
    }

    std::string need(const KvSection& s, const char* key) {
        auto it = s.kv.find(key);
        if (it == s.kv.end()) {
            err(std::string(key) + ": missing required key");
            return "";
        }
        return it->second;
    }

    std::string get(const KvSection& s, const char* key, const std::string& dflt) {
        auto it = s.kv.find(key);
        return it == s.kv.end() ? dflt : it->second;
    }

    bool get_bool(const KvSection& s, const char* key, bool dflt) {
        auto it = s.kv.find(key);
        if (it == s.kv.end()) return dflt;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        err(std::string(key) + ": expected true/false, got '" + it->second + "'");
        return dflt;
    }

    template <class T>
    T get_num(const KvSection& s, const char* key, T dflt) {
        auto it = s.kv.find(key);
        if (it == s.kv.end()) return dflt;
        char* end = nullptr;
        double v = std::strtod(it->second.c_str(), &end);
        if (end != it->second.c_str() + it->second.size()) {
            err(std::string(key) + ": not a number: '" + it->second + "'");
            return dflt;
        }
        return static_cast<T>(v);
    }

    void need_file(const KvSection& s, const char* key, const std::string& resolved) {
        if (!resolved.empty() && !file_exists(resolved))
            err(std::string(key) + ": path does not exist: " + resolved);
    }

    void parse_output(const KvSection& s) {
        check_known(s, {"dir"});
        plan_.output_dir = resolve(need(s, "dir"));
    }

    void parse_settings(const KvSection& s) {
        check_known(s, {"seed", "threads", "runs"});
        plan_.seed = get_num<uint64_t>(s, "seed", 1);
        plan_.threads = get_num<int>(s, "threads", 1);
        plan_.default_runs = get_num<int>(s, "runs", 10);
    }

    void parse_dataset(const KvSection& s) {
        check_known(s, {"path", "format", "undersample", "seed"});
        DatasetSpec d;
        d.name = s.name;
        if (d.name.empty()) err("dataset section needs a name");
        d.path = resolve(need(s, "path"));
        need_file(s, "path", d.path);
        std::string fmt = get(s, "format", "tsv");
        try {
            d.format = parse_dataset_format(fmt);
        } catch (const std::exception& e) {
            err(std::string("format: ") + e.what());
        }
        d.undersample = get_bool(s, "undersample", false);
        d.seed = get_num<uint64_t>(s, "seed", plan_.seed);
        plan_.datasets.push_back(std::move(d));
    }

    void parse_space(const KvSection& s) {
        check_known(s, {"kind", "path", "corpus", "family", "dim", "window", "negatives", "lr",
                        "epochs", "min_count", "seed", "grid", "similarity", "relatedness",
                        "vocab_file", "vocab_dataset", "workers"});
        SpaceSpec sp;
        sp.name = s.name;
        if (sp.name.empty()) err("space section needs a name");
        std::string kind = need(s, "kind");
        if (kind == "load") {
            sp.kind = SpaceSpec::Kind::Load;
            sp.path = resolve(need(s, "path"));
            need_file(s, "path", sp.path);
        } else if (kind == "sgns") {
            sp.kind = SpaceSpec::Kind::Sgns;
            sp.corpus = resolve(need(s, "corpus"));
            need_file(s, "corpus", sp.corpus);
            sp.family = get(s, "family", "corpus");
            if (sp.family != "network" && sp.family != "association" && sp.family != "corpus")
                err("family: expected network/association/corpus, got '" + sp.family + "'");
            sp.sgns.dim = get_num<size_t>(s, "dim", 300);
            sp.sgns.window = get_num<int>(s, "window", 3);
            sp.sgns.negatives = get_num<int>(s, "negatives", 5);
            sp.sgns.lr = get_num<double>(s, "lr", 0.01);
            sp.sgns.epochs = get_num<int>(s, "epochs", 5);
            sp.sgns.min_count = get_num<size_t>(s, "min_count", 1);
            sp.sgns.seed = get_num<uint64_t>(s, "seed", plan_.seed);
            sp.sgns.workers = get_num<int>(s, "workers", plan_.threads);
            sp.grid = get_bool(s, "grid", false);
            if (sp.grid) {
                sp.similarity = resolve(need(s, "similarity"));
                sp.relatedness = resolve(need(s, "relatedness"));
                need_file(s, "similarity", sp.similarity);
                need_file(s, "relatedness", sp.relatedness);
            }
        } else if (kind == "random") {
            sp.kind = SpaceSpec::Kind::Random;
            sp.sgns.dim = get_num<size_t>(s, "dim", 300);
            sp.sgns.seed = get_num<uint64_t>(s, "seed", plan_.seed);
            sp.vocab_file = get(s, "vocab_file", "");
            sp.vocab_dataset = get(s, "vocab_dataset", "");
            if (!sp.vocab_file.empty()) {
                sp.vocab_file = resolve(sp.vocab_file);
                need_file(s, "vocab_file", sp.vocab_file);
            }
            if (sp.vocab_file.empty() == sp.vocab_dataset.empty())
                err("random space needs exactly one of vocab_file / vocab_dataset");
        } else {
            err("kind: expected load/sgns/random, got '" + kind + "'");
        }
        plan_.spaces.push_back(std::move(sp));
    }

    void parse_classifier(const KvSection& s) {
        check_known(s, {"type", "dataset", "space", "epochs", "batch_size", "seq_len", "lr",
                        "dropout_keep", "lstm_units", "trainable", "runs", "seed", "lambda"});
        ClassifierSpec c;
        c.name = s.name;
        if (c.name.empty()) err("classifier section needs a name");
        c.type = need(s, "type");
        if (c.type != "bilstm" && c.type != "linear")
            err("type: expected bilstm/linear, got '" + c.type + "'");
        c.dataset = need(s, "dataset");
        if (c.type == "bilstm") c.space = need(s, "space");
        c.cfg.epochs = get_num<int>(s, "epochs", 10);
        c.cfg.batch_size = get_num<int>(s, "batch_size", 64);
        c.cfg.seq_len = get_num<int>(s, "seq_len", 30);
        c.cfg.lr = get_num<double>(s, "lr", 0.01);
        c.cfg.dropout_keep = get_num<double>(s, "dropout_keep", 0.8);
        c.cfg.lstm_units = get_num<int>(s, "lstm_units", 48);
        c.cfg.trainable_embeddings = get_bool(s, "trainable", false);
        c.cfg.seed = get_num<uint64_t>(s, "seed", plan_.seed);
        c.runs = get_num<int>(s, "runs", plan_.default_runs);
        if (c.runs < 1) err("runs: must be >= 1");
        c.linear_epochs = get_num<int>(s, "epochs", 5);
        std::string lambda = get(s, "lambda", "auto");
        if (lambda != "auto") {
            char* end = nullptr;
            double v = std::strtod(lambda.c_str(), &end);
            if (end != lambda.c_str() + lambda.size() || v <= 0)
                err("lambda: expected 'auto' or a positive number");
            else
                c.lambda = v;
        }
        plan_.classifiers.push_back(std::move(c));
    }

    void parse_analysis(const KvSection& s) {
        AnalysisSpec a;
        a.name = s.name;
        if (a.name.empty()) err("analysis section needs a name");
        a.type = need(s, "type");
        a.seed = get_num<uint64_t>(s, "seed", plan_.seed);
        if (a.type == "profile") {
            check_known(s, {"type", "classifier", "fractions", "seed"});
            a.classifier = need(s, "classifier");
            for (const auto& f : split_on(get(s, "fractions", "0.1,0.25,0.5,0.75,1.0"), ',')) {
                char* end = nullptr;
                double v = std::strtod(strip(f).c_str(), &end);
                if (strip(f).empty() || end != strip(f).c_str() + strip(f).size())
                    err("fractions: bad value '" + f + "'");
                else
                    a.fractions.push_back(v);
            }
        } else if (a.type == "cross-train") {
            check_known(s, {"type", "classifier", "datasets", "seed"});
            a.classifier = need(s, "classifier");
            for (const auto& d : split_on(need(s, "datasets"), ','))
                if (!strip(d).empty()) a.datasets.push_back(strip(d));
            if (a.datasets.size() < 2) err("datasets: cross-train needs at least 2 datasets");
        } else if (a.type == "bow") {
            check_known(s, {"type", "datasets", "k", "function_words", "epochs", "seed"});
            for (const auto& d : split_on(need(s, "datasets"), ','))
                if (!strip(d).empty()) a.datasets.push_back(strip(d));
            if (a.datasets.empty()) err("datasets: bow needs at least 1 dataset");
            a.k = get_num<size_t>(s, "k", 100);
            a.function_words = resolve(need(s, "function_words"));
            need_file(s, "function_words", a.function_words);
            a.epochs = get_num<int>(s, "epochs", 5);
        } else if (a.type == "ensemble") {
            check_known(s, {"type", "members", "weights", "gold", "seed"});
            for (const auto& mref : split_on(need(s, "members"), ',')) {
                std::string r = strip(mref);
                if (r.empty()) continue;
                if (r.rfind("classifier:", 0) != 0 && r.rfind("file:", 0) != 0)
                    err("members: expected classifier:<name> or file:<path>, got '" + r + "'");
                else if (r.rfind("file:", 0) == 0) {
                    std::string p = resolve(r.substr(5));
                    need_file(s, "members", p);
                    a.members.push_back("file:" + p);
                } else {
                    a.members.push_back(r);
                }
            }
            if (a.members.empty()) err("members: ensemble needs at least 1 member");
            a.weights = get(s, "weights", "none");
            a.gold = need(s, "gold");
        } else {
            err("type: expected profile/cross-train/bow/ensemble, got '" + a.type + "'");
        }
        plan_.analyses.push_back(std::move(a));
    }

    void cross_checks() {
        std::set<std::string> ds, sp, cl;
        for (const auto& d : plan_.datasets)
            if (!ds.insert(d.name).second) errors_.push_back("[dataset " + d.name + "] duplicate name");
        for (const auto& x : plan_.spaces)
            if (!sp.insert(x.name).second) errors_.push_back("[space " + x.name + "] duplicate name");
        for (const auto& c : plan_.classifiers)
            if (!cl.insert(c.name).second)
                errors_.push_back("[classifier " + c.name + "] duplicate name");

        for (const auto& x : plan_.spaces)
            if (!x.vocab_dataset.empty() && !ds.count(x.vocab_dataset))
                errors_.push_back("[space " + x.name + "] vocab_dataset: unknown dataset '" +
                                  x.vocab_dataset + "'");
        for (const auto& c : plan_.classifiers) {
            if (!c.dataset.empty() && !ds.count(c.dataset))
                errors_.push_back("[classifier " + c.name + "] dataset: unknown dataset '" + c.dataset +
                                  "'");
            if (c.type == "bilstm" && !c.space.empty() && !sp.count(c.space))
                errors_.push_back("[classifier " + c.name + "] space: unknown space '" + c.space + "'");
        }
        for (const auto& a : plan_.analyses) {
            if (!a.classifier.empty() && !cl.count(a.classifier))
                errors_.push_back("[analysis " + a.name + "] classifier: unknown classifier '" +
                                  a.classifier + "'");
            for (const auto& d : a.datasets)
                if (!ds.count(d))
                    errors_.push_back("[analysis " + a.name + "] datasets: unknown dataset '" + d + "'");
            if (a.type == "ensemble") {
                if (!a.gold.empty() && !ds.count(a.gold))
                    errors_.push_back("[analysis " + a.name + "] gold: unknown dataset '" + a.gold + "'");
                for (const auto& mref : a.members)
                    if (mref.rfind("classifier:", 0) == 0 && !cl.count(mref.substr(11)))
                        errors_.push_back("[analysis " + a.name + "] members: unknown classifier '" +
                                          mref.substr(11) + "'");
            }
        }
    }
};

}  // namespace

std::vector<std::string> validate_manifest(const Manifest& m) {
    std::vector<std::string> errors;
    PlanBuilder(m).build(errors);
    return errors;
}

// ------------------------------------------------------------- reporting

json eval_report_json(const EvalReport& r) {
    json j;
    j["precision"] = r.precision.mean;
    j["recall"] = r.recall.mean;
    j["f1"] = r.f1.mean;
    j["f1_positive"] = r.f1_positive.mean;
    if (!std::isnan(r.oov)) j["oov"] = r.oov;
    j["mode"] = eval_mode_name(r.mode);
    j["runs"] = r.runs;
    if (r.runs > 1) {
        j["precision_std"] = r.precision.stddev;
        j["recall_std"] = r.recall.stddev;
        j["f1_std"] = r.f1.stddev;
        j["f1_positive_std"] = r.f1_positive.stddev;
    }
    return j;
}

json grid_result_json(const GridResult& g) {
    json rows = json::array();
    for (const auto& row : g.rows) {
        json r;
        r["window"] = row.cfg.window;
        r["negatives"] = row.cfg.negatives;
        r["lr"] = row.cfg.lr;
        r["epochs"] = row.cfg.epochs;
        if (row.error.empty()) {
            r["rho_similarity"] = row.rho_similarity;
            r["rho_relatedness"] = row.rho_relatedness;
            r["average"] = row.average;
            r["coverage_similarity"] = row.coverage_similarity;
            r["coverage_relatedness"] = row.coverage_relatedness;
        } else {
            r["error"] = row.error;
        }
        rows.push_back(std::move(r));
    }
    json j;
    j["rows"] = std::move(rows);
    j["best_index"] = g.best_index;
    return j;
}

json cross_matrix_json(const CrossTrainMatrix& m) {
    json j;
    j["datasets"] = m.names;
    json cells = json::array();
    for (size_t i = 0; i < m.cells.size(); ++i) {
        json row = json::array();
        for (size_t k = 0; k < m.cells[i].size(); ++k) {
            const CrossCell& c = m.cells[i][k];
            json cj;
            cj["train"] = m.names[i];
            cj["test"] = m.names[k];
            if (c.ok) cj["report"] = eval_report_json(c.report);
            else cj["error"] = c.error;
            row.push_back(std::move(cj));
        }
        cells.push_back(std::move(row));
    }
    j["cells"] = std::move(cells);
    return j;
}

json bow_report_json(const BowReport& r) {
    json j;
    j["intersection"] = r.intersection;
    j["content_unigrams"] = r.content_unigrams;
    j["function_unigrams"] = r.function_unigrams;
    j["bigrams"] = r.bigrams;
    j["content_function_ratio"] = r.content_function_ratio;
    return j;
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << j.dump(2) << '\n';
}

// -------------------------------------------------------------- running

namespace {

std::string hash16(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

uint64_t hash_file_content(const std::string& path) { return fnv1a64(read_file(path)); }

struct ClassifierOutput {
    json report;
    double dev_f1 = 0;
    std::string predictions_path;
};

struct RunContext {
    const Plan& plan;
    std::ostream& log;
    fs::path outdir;
    json summary_stages = json::array();

    std::map<std::string, LabeledDataset> full_datasets;
    std::map<std::string, SplitSet> splits;
    std::map<std::string, uint64_t> dataset_hashes;
    std::map<std::string, SemanticSpace> spaces;
    std::map<std::string, uint64_t> space_hashes;
    std::map<std::string, const ClassifierSpec*> classifier_specs;
    std::map<std::string, ClassifierOutput> classifier_outputs;
    std::map<std::string, uint64_t> classifier_hashes;

    RunContext(const Plan& p, std::ostream& l) : plan(p), log(l), outdir(p.output_dir) {}

    std::string report_path(const std::string& stage, const std::string& name, uint64_t hash) const {
        return (outdir / "reports" / (stage + "__" + name + "__" + hash16(hash) + ".json")).string();
    }

    void add_summary(const std::string& stage, const std::string& name, uint64_t hash,
                     const json& digest) {
        json s;
        s["stage"] = stage;
        s["name"] = name;
        s["hash"] = hash16(hash);
        s["digest"] = digest;
        summary_stages.push_back(std::move(s));
    }
};

json dataset_digest(const SplitSet& sp, const LabeledDataset& full) {
    auto part = [](const LabeledDataset& d) {
        json j;
        j["size"] = d.size();
        j["arg"] = d.count(Label::Argument);
        j["non_arg"] = d.count(Label::NonArgument);
        return j;
    };
    json j;
    j["total"] = full.size();
    j["arg"] = full.count(Label::Argument);
    j["non_arg"] = full.count(Label::NonArgument);
    j["train"] = part(sp.train);
    j["dev"] = part(sp.dev);
    j["test"] = part(sp.test);
    return j;
}

void run_dataset_stage(RunContext& ctx, const DatasetSpec& spec) {
    ctx.log << "[dataset " << spec.name << "] loading " << spec.path << "\n";
    uint64_t h = fnv1a64(spec.name);
    h = mix_seed(h, hash_file_content(spec.path));
    h = mix_seed(h, spec.undersample ? 1 : 0, spec.seed,
                 spec.format == DatasetFormat::Tsv ? 0 : 1);

    LabeledDataset d = load_dataset(spec.path, spec.format);
    if (spec.undersample) d = undersample(d, spec.seed);
    SplitSet sp = split(d, spec.seed);

    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["stage"] = "dataset";
    report["name"] = spec.name;
    report["config"] = {{"path", spec.path},
                        {"format", spec.format == DatasetFormat::Tsv ? "tsv" : "jsonl"},
                        {"undersample", spec.undersample},
                        {"seed", spec.seed}};
    report["result"] = dataset_digest(sp, d);
    write_json_file(report, ctx.report_path("dataset", spec.name, h));

    ctx.add_summary("dataset", spec.name, h, report["result"]);
    ctx.dataset_hashes[spec.name] = h;
    ctx.full_datasets[spec.name] = std::move(d);
    ctx.splits[spec.name] = std::move(sp);
}

void run_space_stage(RunContext& ctx, const SpaceSpec& spec) {
    uint64_t h = fnv1a64(spec.name);
    json config;
    config["seed"] = spec.sgns.seed;
    switch (spec.kind) {
        case SpaceSpec::Kind::Load:
            h = mix_seed(h, hash_file_content(spec.path));
            config["kind"] = "load";
            config["path"] = spec.path;
            break;
        case SpaceSpec::Kind::Sgns:
            h = mix_seed(h, hash_file_content(spec.corpus));
            h = mix_seed(h, spec.sgns.hash(), spec.grid ? 1 : 0);
            if (spec.grid) {
                h = mix_seed(h, hash_file_content(spec.similarity), hash_file_content(spec.relatedness));
            }
            config["kind"] = "sgns";
            config["corpus"] = spec.corpus;
            config["family"] = spec.family;
            config["grid"] = spec.grid;
            config["dim"] = spec.sgns.dim;
            config["window"] = spec.sgns.window;
            config["negatives"] = spec.sgns.negatives;
            config["lr"] = spec.sgns.lr;
            config["epochs"] = spec.sgns.epochs;
            config["min_count"] = spec.sgns.min_count;
            break;
        case SpaceSpec::Kind::Random:
            config["kind"] = "random";
            config["dim"] = spec.sgns.dim;
            if (!spec.vocab_file.empty()) {
                h = mix_seed(h, hash_file_content(spec.vocab_file));
                config["vocab_file"] = spec.vocab_file;
            } else {
                h = mix_seed(h, ctx.dataset_hashes.at(spec.vocab_dataset));
                config["vocab_dataset"] = spec.vocab_dataset;
            }
            h = mix_seed(h, spec.sgns.seed, spec.sgns.dim);
            break;
    }

    std::string artifact = (ctx.outdir / "spaces" / (spec.name + "__" + hash16(h) + ".txt")).string();
    std::string report_file = ctx.report_path("space", spec.name, h);

    if (file_exists(report_file) && (spec.kind == SpaceSpec::Kind::Load || file_exists(artifact))) {
        ctx.log << "[space " << spec.name << "] cached, loading " << artifact << "\n";
        json report = json::parse(read_file(report_file));
        SemanticSpace s = load_space(spec.kind == SpaceSpec::Kind::Load ? spec.path : artifact);
        ctx.add_summary("space", spec.name, h, report["result"]);
        ctx.space_hashes[spec.name] = h;
        ctx.spaces[spec.name] = std::move(s);
        return;
    }

    ctx.log << "[space " << spec.name << "] building\n";
    SemanticSpace s;
    json result;
    if (spec.kind == SpaceSpec::Kind::Load) {
        s = load_space(spec.path);
    } else if (spec.kind == SpaceSpec::Kind::Sgns) {
        SpaceFamily family = spec.family == "network"       ? SpaceFamily::Network
                             : spec.family == "association" ? SpaceFamily::FeatureBased
                                                            : SpaceFamily::Corpus;
        if (spec.grid) {
            ProjectedCorpus corpus;
            corpus.source =
                family == SpaceFamily::FeatureBased ? CorpusSource::Association : CorpusSource::Network;
            for (const auto& line : read_lines(spec.corpus)) {
                auto toks = split_ws(line);
                if (!toks.empty()) corpus.lines.push_back(std::move(toks));
            }
            auto sim = load_benchmark(spec.similarity);
            auto rel = load_benchmark(spec.relatedness);
            GridResult gr = grid_search(corpus, paper_grid(spec.sgns.seed), sim, rel);
            result["grid"] = grid_result_json(gr);
            s = std::move(gr.best_space);
        } else {
            SgnsStats stats;
            s = train_skipgram_file(spec.corpus, spec.sgns, &stats);
            s.meta.family = family;
            result["epoch_mean_loss"] = stats.epoch_mean_loss;
            result["total_pairs"] = stats.total_pairs;
        }
    } else {
        std::vector<std::string> vocab;
        if (!spec.vocab_file.empty()) {
            for (const auto& line : read_lines(spec.vocab_file)) {
                auto w = strip(line);
                if (!w.empty()) vocab.push_back(w);
            }
            std::sort(vocab.begin(), vocab.end());
            vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
        } else {
            auto counts = build_vocab(ctx.splits.at(spec.vocab_dataset).train, 1);
            for (const auto& [w, c] : counts) vocab.push_back(w);
            std::sort(vocab.begin(), vocab.end());
        }
        s = random_space(vocab, spec.sgns.dim, spec.sgns.seed);
    }

    if (spec.kind != SpaceSpec::Kind::Load) save_space(s, artifact);
    result["vocab"] = s.size();
    result["dim"] = s.dim();
    result["family"] = space_family_name(s.meta.family);
    if (spec.kind != SpaceSpec::Kind::Load) result["artifact"] = artifact;

    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["stage"] = "space";
    report["name"] = spec.name;
    report["config"] = config;
    report["result"] = result;
    write_json_file(report, report_file);

    ctx.add_summary("space", spec.name, h, result);
    ctx.space_hashes[spec.name] = h;
    ctx.spaces[spec.name] = std::move(s);
}

json classifier_config_json(const ClassifierSpec& spec) {
    json j;
    j["type"] = spec.type;
    j["dataset"] = spec.dataset;
    j["runs"] = spec.runs;
    j["seed"] = spec.cfg.seed;
    if (spec.type == "bilstm") {
        j["space"] = spec.space;
        j["epochs"] = spec.cfg.epochs;
        j["batch_size"] = spec.cfg.batch_size;
        j["seq_len"] = spec.cfg.seq_len;
        j["lr"] = spec.cfg.lr;
        j["dropout_keep"] = spec.cfg.dropout_keep;
        j["lstm_units"] = spec.cfg.lstm_units;
        j["trainable"] = spec.cfg.trainable_embeddings;
    } else {
        j["epochs"] = spec.linear_epochs;
        j["lambda"] = spec.lambda ? json(*spec.lambda) : json("auto");
    }
    return j;
}

double linear_dev_f1(const LinearModel& m, const SplitSet& sp) {
    std::vector<Label> gold;
    for (const auto& s : sp.dev.sentences) gold.push_back(s.label);
    if (gold.empty()) return 0.0;
    return evaluate(m.predict(sp.dev), gold).f1.mean;
}

void run_classifier_stage(RunContext& ctx, const ClassifierSpec& spec) {
    uint64_t h = fnv1a64(spec.name);
    h = mix_seed(h, ctx.dataset_hashes.at(spec.dataset));
    if (spec.type == "bilstm") h = mix_seed(h, ctx.space_hashes.at(spec.space), spec.cfg.hash());
    else h = mix_seed(h, fnv1a64(spec.lambda ? std::to_string(*spec.lambda) : "auto"),
                      static_cast<uint64_t>(spec.linear_epochs), spec.cfg.seed);
    h = mix_seed(h, static_cast<uint64_t>(spec.runs));

    std::string report_file = ctx.report_path("classifier", spec.name, h);
    std::string preds_file =
        (ctx.outdir / "predictions" / (spec.name + "__" + hash16(h) + ".tsv")).string();
    ctx.classifier_specs[spec.name] = &spec;
    ctx.classifier_hashes[spec.name] = h;

    if (file_exists(report_file) && file_exists(preds_file)) {
        ctx.log << "[classifier " << spec.name << "] cached\n";
        json report = json::parse(read_file(report_file));
        ClassifierOutput out;
        out.report = report;
        out.dev_f1 = report["result"]["dev_f1"].get<double>();
        out.predictions_path = preds_file;
        ctx.add_summary("classifier", spec.name, h, report["result"]["aggregate"]);
        ctx.classifier_outputs[spec.name] = std::move(out);
        return;
    }

    ctx.log << "[classifier " << spec.name << "] training " << spec.runs << " run(s)\n";
    const SplitSet& sp = ctx.splits.at(spec.dataset);
    std::vector<EvalReport> per_run;
    PredictionSet preds;
    double dev_f1 = 0;

    if (spec.type == "bilstm") {
        const SemanticSpace& space = ctx.spaces.at(spec.space);
        for (int r = 0; r < spec.runs; ++r) {
            ClassifierConfig cfg = spec.cfg;
            cfg.seed = spec.cfg.seed + static_cast<uint64_t>(r);
            BiLstmTrainLog log;
            auto [model, report] = train_bilstm(sp, space, cfg, &log);
            per_run.push_back(report);
            if (r == 0) {
                dev_f1 = log.best_epoch >= 0 ? log.epoch_dev_f1[log.best_epoch] : 0.0;
                std::vector<Label> labels;
                std::vector<double> scores;
                for (const auto& s : sp.test.sentences) {
                    double p = model.predict_prob(s.tokens);
                    scores.push_back(p);
                    labels.push_back(p >= 0.5 ? Label::Argument : Label::NonArgument);
                }
                preds = predictions_from_labels(spec.name, spec.dataset + "-test", sp.test, labels,
                                                scores);
            }
        }
    } else {
        std::unordered_set<std::string> train_vocab;
        for (const auto& [w, c] : build_vocab(sp.train, 1)) train_vocab.insert(w);
        for (int r = 0; r < spec.runs; ++r) {
            LinearModel m = train_linear(sp, spec.lambda, spec.linear_epochs,
                                         spec.cfg.seed + static_cast<uint64_t>(r));
            std::vector<Label> gold;
            for (const auto& s : sp.test.sentences) gold.push_back(s.label);
            EvalReport report = evaluate(m.predict(sp.test), gold);
            report.oov = oov_rate(sp.test, train_vocab);
            per_run.push_back(report);
            if (r == 0) {
                dev_f1 = linear_dev_f1(m, sp);
                std::vector<Label> labels;
                std::vector<double> scores;
                for (const auto& s : sp.test.sentences) {
                    double margin = m.margin(featurize_ngrams(s.tokens));
                    labels.push_back(margin >= 0 ? Label::Argument : Label::NonArgument);
                    scores.push_back(1.0 / (1.0 + std::exp(-margin)));
                }
                preds = predictions_from_labels(spec.name, spec.dataset + "-test", sp.test, labels,
                                                scores);
            }
        }
    }

    EvalReport aggregate = aggregate_runs(per_run);
    save_predictions(preds, preds_file);

    json result;
    result["aggregate"] = eval_report_json(aggregate);
    json runs = json::array();
    for (const auto& r : per_run) runs.push_back(eval_report_json(r));
    result["per_run"] = std::move(runs);
    result["dev_f1"] = dev_f1;
    result["predictions"] = preds_file;

    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["stage"] = "classifier";
    report["name"] = spec.name;
    report["config"] = classifier_config_json(spec);
    report["result"] = result;
    write_json_file(report, report_file);

    ClassifierOutput out;
    out.report = report;
    out.dev_f1 = dev_f1;
    out.predictions_path = preds_file;
    ctx.add_summary("classifier", spec.name, h, result["aggregate"]);
    ctx.classifier_outputs[spec.name] = std::move(out);
}

TrainerSpec trainer_from_spec(RunContext& ctx, const ClassifierSpec& spec) {
    TrainerSpec t;
    t.name = spec.name;
    if (spec.type == "bilstm") {
        const SemanticSpace* space = &ctx.spaces.at(spec.space);
        ClassifierConfig cfg = spec.cfg;
        t.fit = [space, cfg](const SplitSet& sp, uint64_t seed) -> PredictFn {
            ClassifierConfig c = cfg;
            c.seed = seed;
            auto trained = train_bilstm(sp, *space, c);
            auto model = std::make_shared<BiLstmModel>(std::move(trained.first));
            return [model](const LabeledDataset& d) { return model->predict(d); };
        };
    } else {
        auto lambda = spec.lambda;
        int epochs = spec.linear_epochs;
        t.fit = [lambda, epochs](const SplitSet& sp, uint64_t seed) -> PredictFn {
            auto model = std::make_shared<LinearModel>(train_linear(sp, lambda, epochs, seed));
            return [model](const LabeledDataset& d) { return model->predict(d); };
        };
    }
    return t;
}

void run_analysis_stage(RunContext& ctx, const AnalysisSpec& spec) {
    uint64_t h = fnv1a64(spec.name);
    h = mix_seed(h, fnv1a64(spec.type), spec.seed);
    json config;
    config["type"] = spec.type;
    config["seed"] = spec.seed;

    if (!spec.classifier.empty()) {
        h = mix_seed(h, ctx.classifier_hashes.at(spec.classifier));
        config["classifier"] = spec.classifier;
    }
    for (const auto& d : spec.datasets) h = mix_seed(h, ctx.dataset_hashes.at(d));
    if (!spec.datasets.empty()) config["datasets"] = spec.datasets;

    json result;
    if (spec.type == "profile") {
        const ClassifierSpec& cs = *ctx.classifier_specs.at(spec.classifier);
        h = mix_seed(h, ctx.dataset_hashes.at(cs.dataset));
        for (double f : spec.fractions) h = mix_seed(h, fnv1a64(std::to_string(f)));
        config["fractions"] = spec.fractions;
        std::string report_file = ctx.report_path("analysis", spec.name, h);
        if (file_exists(report_file)) {
            ctx.log << "[analysis " << spec.name << "] cached\n";
            json report = json::parse(read_file(report_file));
            ctx.add_summary("analysis", spec.name, h, report["result"]);
            return;
        }
        ctx.log << "[analysis " << spec.name << "] profile over " << spec.fractions.size()
                << " fractions\n";
        auto curve = profile_curve(trainer_from_spec(ctx, cs), ctx.splits.at(cs.dataset),
                                   spec.fractions, spec.seed);
        json points = json::array();
        for (const auto& [f, r] : curve) {
            json p;
            p["fraction"] = f;
            p["report"] = eval_report_json(r);
            points.push_back(std::move(p));
        }
        result["curve"] = std::move(points);
        json report;
        report["schema_version"] = kReportSchemaVersion;
        report["stage"] = "analysis";
        report["name"] = spec.name;
        report["config"] = config;
        report["result"] = result;
        write_json_file(report, report_file);
        ctx.add_summary("analysis", spec.name, h, result);
        return;
    }

    if (spec.type == "cross-train") {
        const ClassifierSpec& cs = *ctx.classifier_specs.at(spec.classifier);
        std::string report_file = ctx.report_path("analysis", spec.name, h);
        if (file_exists(report_file)) {
            ctx.log << "[analysis " << spec.name << "] cached\n";
            json report = json::parse(read_file(report_file));
            ctx.add_summary("analysis", spec.name, h, report["result"]);
            return;
        }
        ctx.log << "[analysis " << spec.name << "] cross-train over " << spec.datasets.size()
                << " datasets\n";
        std::vector<SplitSet> sets;
        for (const auto& d : spec.datasets) sets.push_back(ctx.splits.at(d));
        auto matrix = cross_train(sets, trainer_from_spec(ctx, cs), spec.seed);
        result = cross_matrix_json(matrix);
        json report;
        report["schema_version"] = kReportSchemaVersion;
        report["stage"] = "analysis";
        report["name"] = spec.name;
        report["config"] = config;
        report["result"] = result;
        write_json_file(report, report_file);
        ctx.add_summary("analysis", spec.name, h, result);
        return;
    }

    if (spec.type == "bow") {
        h = mix_seed(h, hash_file_content(spec.function_words), spec.k,
                     static_cast<uint64_t>(spec.epochs));
        config["k"] = spec.k;
        config["function_words"] = spec.function_words;
        config["epochs"] = spec.epochs;
        std::string report_file = ctx.report_path("analysis", spec.name, h);
        if (file_exists(report_file)) {
            ctx.log << "[analysis " << spec.name << "] cached\n";
            json report = json::parse(read_file(report_file));
            ctx.add_summary("analysis", spec.name, h, report["result"]);
            return;
        }
        ctx.log << "[analysis " << spec.name << "] bow over " << spec.datasets.size() << " datasets\n";
        std::vector<LinearModel> models;
        for (const auto& d : spec.datasets)
            models.push_back(train_linear(ctx.splits.at(d), std::nullopt, spec.epochs, spec.seed));
        auto bow = bow_report(models, spec.k, load_function_words(spec.function_words));
        result = bow_report_json(bow);
        json report;
        report["schema_version"] = kReportSchemaVersion;
        report["stage"] = "analysis";
        report["name"] = spec.name;
        report["config"] = config;
        report["result"] = result;
        write_json_file(report, report_file);
        ctx.add_summary("analysis", spec.name, h, result);
        return;
    }

    // ensemble
    std::vector<PredictionSet> members;
    std::vector<double> member_dev_f1;
    for (const auto& mref : spec.members) {
        if (mref.rfind("classifier:", 0) == 0) {
            const auto& out = ctx.classifier_outputs.at(mref.substr(11));
            members.push_back(load_external_predictions(out.predictions_path));
            member_dev_f1.push_back(out.dev_f1);
            h = mix_seed(h, ctx.classifier_hashes.at(mref.substr(11)));
        } else {
            std::string p = mref.substr(5);
            members.push_back(load_external_predictions(p));
            member_dev_f1.push_back(-1);
            h = mix_seed(h, hash_file_content(p));
        }
    }
    h = mix_seed(h, fnv1a64(spec.weights), ctx.dataset_hashes.at(spec.gold));
    config["members"] = spec.members;
    config["weights"] = spec.weights;
    config["gold"] = spec.gold;

    std::string report_file = ctx.report_path("analysis", spec.name, h);
    if (file_exists(report_file)) {
        ctx.log << "[analysis " << spec.name << "] cached\n";
        json report = json::parse(read_file(report_file));
        ctx.add_summary("analysis", spec.name, h, report["result"]);
        return;
    }
    ctx.log << "[analysis " << spec.name << "] ensemble of " << members.size() << " members\n";

    std::optional<std::vector<double>> weights;
    if (spec.weights == "dev-f1") {
        std::vector<double> w;
        for (size_t i = 0; i < members.size(); ++i) {
            if (member_dev_f1[i] < 0)
                throw std::runtime_error("[analysis " + spec.name +
                                         "] weights=dev-f1 requires classifier members only");
            w.push_back(member_dev_f1[i]);
        }
        weights = std::move(w);
    } else if (spec.weights != "none") {
        std::vector<double> w;
        for (const auto& ws : split_on(spec.weights, ','))
            w.push_back(std::strtod(strip(ws).c_str(), nullptr));
        weights = std::move(w);
    }

    auto voted = ensemble_predict(members, weights);
    std::unordered_map<std::string, Label> gold_by_id;
    for (const auto& s : ctx.splits.at(spec.gold).test.sentences) gold_by_id[s.id] = s.label;
    std::vector<Label> pred, gold;
    for (const auto& [id, label] : voted) {
        auto it = gold_by_id.find(id);
        if (it == gold_by_id.end())
            throw std::runtime_error("[analysis " + spec.name + "] id '" + id +
                                     "' not in test split of dataset '" + spec.gold + "'");
        pred.push_back(label);
        gold.push_back(it->second);
    }
    result["report"] = eval_report_json(evaluate(pred, gold));
    if (weights) result["resolved_weights"] = *weights;
    result["members"] = spec.members;

    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["stage"] = "analysis";
    report["name"] = spec.name;
    report["config"] = config;
    report["result"] = result;
    write_json_file(report, report_file);
    ctx.add_summary("analysis", spec.name, h, result);
}

}  // namespace

int run_manifest(const Manifest& m, std::ostream& log) {
    std::vector<std::string> errors;
    Plan plan = PlanBuilder(m).build(errors);
    if (!errors.empty()) {
        log << "manifest validation failed (" << errors.size() << " error(s)):\n";
        for (const auto& e : errors) log << "  " << e << "\n";
        return 1;
    }

    try {
        RunContext ctx(plan, log);
        fs::create_directories(ctx.outdir / "reports");
        fs::create_directories(ctx.outdir / "spaces");
        fs::create_directories(ctx.outdir / "predictions");

        for (const auto& d : plan.datasets) run_dataset_stage(ctx, d);
        for (const auto& s : plan.spaces) run_space_stage(ctx, s);
        for (const auto& c : plan.classifiers) run_classifier_stage(ctx, c);
        for (const auto& a : plan.analyses) run_analysis_stage(ctx, a);

        json summary;
        summary["schema_version"] = kReportSchemaVersion;
        summary["manifest_hash"] = hash16(fnv1a64(m.text));
        summary["seed"] = plan.seed;
        summary["stages"] = ctx.summary_stages;
        write_json_file(summary, (ctx.outdir / "summary.json").string());
        log << "summary written to " << (ctx.outdir / "summary.json").string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        log << "runtime failure: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace argsem
