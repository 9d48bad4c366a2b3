#include "nbfit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nbfit/common.hpp"

namespace nbfit {

namespace {

long long parse_count_token(const std::string& token, long long line_no) {
    long long value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || value < 0)
        throw DataError("line " + std::to_string(line_no) + ": bad count token '" + token + "'");
    return value;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::string fmt17(double x) {
    if (std::isnan(x)) throw DataError("write_result: refusing to serialize NaN");
    if (std::isinf(x)) throw DataError("write_result: non-finite value outside loglik");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

CountSample read_dataset(std::istream& in, DatasetFormat format) {
    if (format == DatasetFormat::RawCounts) {
        std::vector<long long> data;
        std::string line;
        long long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            std::istringstream ls(strip_cr(line));
            std::string token;
            while (ls >> token) data.push_back(parse_count_token(token, line_no));
        }
        if (data.empty()) throw DataError("empty dataset");
        return CountSample::summarize(data);
    }

    // FrequencyCSV
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "value,count")
        throw DataError("line 1: expected header 'value,count'");
    std::map<long long, long long> freq;
    long long prev = -1;
    long long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError("line " + std::to_string(line_no) + ": expected 'value,count'");
        const long long value = parse_count_token(line.substr(0, comma), line_no);
        const long long count = parse_count_token(line.substr(comma + 1), line_no);
        if (value <= prev)
            throw DataError("line " + std::to_string(line_no) +
                            ": values must be strictly increasing");
        if (count < 1)
            throw DataError("line " + std::to_string(line_no) + ": count must be >= 1");
        freq[value] = count;
        prev = value;
    }
    if (freq.empty()) throw DataError("empty dataset");
    return CountSample::from_frequencies(freq);
}

CountSample read_dataset_file(const std::string& path, DatasetFormat format) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return read_dataset(in, format);
}

std::string write_frequency_csv(const CountSample& s) {
    std::string out = "value,count\n";
    for (const auto& [y, f] : s.freq())
        out += std::to_string(y) + "," + std::to_string(f) + "\n";
    return out;
}

ResultDocument make_result_document(const CountSample& s, const std::string& model,
                                    const FitResult& fit, const FitConfig& cfg) {
    ResultDocument doc;
    doc.n = s.n();
    doc.mean = s.mean();
    doc.var_biased = s.var_biased();
    doc.var_unbiased = s.var_unbiased();
    doc.max = s.max();
    doc.model = model;
    if (const auto* nb = std::get_if<NBParams>(&fit.params)) {
        doc.nu = nb->nu;
        doc.p = nb->p;
    } else {
        const auto& ext = std::get<ExtNBParams>(fit.params);
        doc.mu = ext.mu;
        doc.p = ext.p;
    }
    doc.loglik = fit.loglik;
    doc.at_boundary = fit.at_boundary;
    doc.branch = to_string(fit.branch);
    doc.iterations = fit.iterations;
    doc.init_nu = fit.init_nu;
    doc.converged = fit.converged;
    doc.config = cfg;
    return doc;
}

std::string write_result(const ResultDocument& doc) {
    std::string o;
    o += "{\n";
    o += "  \"schema_version\": \"" + doc.schema_version + "\",\n";
    o += "  \"input\": {\n";
    o += "    \"n\": " + std::to_string(doc.n) + ",\n";
    o += "    \"mean\": " + fmt17(doc.mean) + ",\n";
    o += "    \"var_biased\": " + fmt17(doc.var_biased) + ",\n";
    o += "    \"var_unbiased\": " +
         (doc.var_unbiased ? fmt17(*doc.var_unbiased) : std::string("null")) + ",\n";
    o += "    \"max\": " + std::to_string(doc.max) + "\n";
    o += "  },\n";
    o += "  \"model\": \"" + doc.model + "\",\n";
    o += "  \"estimates\": {";
    bool first = true;
    auto emit = [&](const char* key, const std::optional<double>& v) {
        if (!v) return;
        o += std::string(first ? "" : ",") + "\n    \"" + key + "\": " + fmt17(*v);
        first = false;
    };
    emit("nu", doc.nu);
    emit("mu", doc.mu);
    emit("lambda", doc.lambda);
    emit("p", doc.p);
    o += "\n  },\n";
    if (std::isinf(doc.loglik) && doc.loglik < 0.0)
        o += "  \"loglik\": \"-inf\",\n";
    else
        o += "  \"loglik\": " + fmt17(doc.loglik) + ",\n";
    o += std::string("  \"at_boundary\": ") + bool_str(doc.at_boundary) + ",\n";
    o += "  \"branch\": \"" + doc.branch + "\",\n";
    o += "  \"diagnostics\": {\n";
    o += "    \"iterations\": " + std::to_string(doc.iterations) + ",\n";
    o += "    \"init_nu\": " + fmt17(doc.init_nu) + ",\n";
    o += std::string("    \"converged\": ") + bool_str(doc.converged) + "\n";
    o += "  },\n";
    o += "  \"config\": {\n";
    o += "    \"nu_max\": " + fmt17(doc.config.nu_max) + ",\n";
    o += "    \"epsilon\": " + fmt17(doc.config.epsilon) + ",\n";
    o += "    \"delta\": " + fmt17(doc.config.delta) + ",\n";
    o += "    \"max_iter\": " + std::to_string(doc.config.max_iter) + ",\n";
    o += "    \"grad_tol\": " + fmt17(doc.config.grad_tol) + "\n";
    o += "  }";
    if (doc.gof) {
        const GofBlock& g = *doc.gof;
        o += ",\n  \"gof\": {\n";
        o += "    \"D_n\": " + fmt17(g.D_n) + ",\n";
        o += "    \"d_n\": " + fmt17(g.d_n) + ",\n";
        o += "    \"p_value\": " + fmt17(g.p_value) + ",\n";
        o += std::string("    \"reject\": ") + bool_str(g.reject) + ",\n";
        o += "    \"boot_reps\": " + std::to_string(g.boot_reps) + ",\n";
        o += "    \"level\": " + fmt17(g.level) + ",\n";
        o += "    \"seed\": " + std::to_string(g.seed) + "\n";
        o += "  }";
    }
    o += "\n}\n";
    return o;
}

ResultDocument parse_result(const std::string& json_text) {
    try {
        const nlohmann::json j = nlohmann::json::parse(json_text);
        ResultDocument doc;
        doc.schema_version = j.at("schema_version").get<std::string>();
        const auto& input = j.at("input");
        doc.n = input.at("n").get<long long>();
        doc.mean = input.at("mean").get<double>();
        doc.var_biased = input.at("var_biased").get<double>();
        if (!input.at("var_unbiased").is_null())
            doc.var_unbiased = input.at("var_unbiased").get<double>();
        doc.max = input.at("max").get<long long>();
        doc.model = j.at("model").get<std::string>();
        const auto& est = j.at("estimates");
        if (est.contains("nu")) doc.nu = est.at("nu").get<double>();
        if (est.contains("mu")) doc.mu = est.at("mu").get<double>();
        if (est.contains("lambda")) doc.lambda = est.at("lambda").get<double>();
        if (est.contains("p")) doc.p = est.at("p").get<double>();
        const auto& ll = j.at("loglik");
        if (ll.is_string()) {
            if (ll.get<std::string>() != "-inf")
                throw DataError("parse_result: unknown loglik sentinel");
            doc.loglik = -std::numeric_limits<double>::infinity();
        } else {
            doc.loglik = ll.get<double>();
        }
        doc.at_boundary = j.at("at_boundary").get<bool>();
        doc.branch = j.at("branch").get<std::string>();
        const auto& diag = j.at("diagnostics");
        doc.iterations = diag.at("iterations").get<int>();
        doc.init_nu = diag.at("init_nu").get<double>();
        doc.converged = diag.at("converged").get<bool>();
        const auto& cfg = j.at("config");
        doc.config.nu_max = cfg.at("nu_max").get<double>();
        doc.config.epsilon = cfg.at("epsilon").get<double>();
        doc.config.delta = cfg.at("delta").get<double>();
        doc.config.max_iter = cfg.at("max_iter").get<int>();
        doc.config.grad_tol = cfg.at("grad_tol").get<double>();
        if (j.contains("gof")) {
            const auto& g = j.at("gof");
            GofBlock block;
            block.D_n = g.at("D_n").get<double>();
            block.d_n = g.at("d_n").get<double>();
            block.p_value = g.at("p_value").get<double>();
            block.reject = g.at("reject").get<bool>();
            block.boot_reps = g.at("boot_reps").get<int>();
            block.level = g.at("level").get<double>();
            block.seed = g.at("seed").get<std::uint64_t>();
            doc.gof = block;
        }
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("parse_result: ") + e.what());
    }
}

}  // namespace nbfit
