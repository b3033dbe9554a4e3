#include "ltccp/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "ltccp/errors.hpp"

namespace ltccp::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_bare_key(std::string_view s) {
    if (s.empty()) return false;
    for (const char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    }
    return true;
}

// Drops a trailing comment, leaving '#' inside strings alone.
std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_string && c == '\\') {
            ++i;
        } else if (c == '"') {
            in_string = !in_string;
        } else if (c == '#' && !in_string) {
            return line.substr(0, i);
        }
    }
    return line;
}

json parse_scalar(std::string_view v, std::size_t line) {
    if (v.empty()) fail(line, "missing value");
    if (v.front() == '"') {
        if (v.size() < 2 || v.back() != '"') fail(line, "unterminated string");
        std::string out;
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            char c = v[i];
            if (c == '\\') {
                if (i + 2 >= v.size()) fail(line, "dangling escape");
                const char e = v[++i];
                c = e == 'n' ? '\n' : e == 't' ? '\t' : e;
                if (e != 'n' && e != 't' && e != '"' && e != '\\') fail(line, "unsupported escape");
            } else if (c == '"') {
                fail(line, "unescaped quote inside string");
            }
            out.push_back(c);
        }
        return out;
    }
    if (v == "true") return true;
    if (v == "false") return false;
    const bool integral = v.find_first_of(".eEinn") == std::string_view::npos;
    const char* first = v.data() + (v.front() == '+' ? 1 : 0);
    const char* last = v.data() + v.size();
    if (integral) {
        std::int64_t i = 0;
        const auto res = std::from_chars(first, last, i);
        if (res.ec == std::errc{} && res.ptr == last) return i;
    } else {
        double d = 0;
        const auto res = std::from_chars(first, last, d);
        if (res.ec == std::errc{} && res.ptr == last) return d;
    }
    fail(line, "cannot parse value '" + std::string(v) + "'");
}

json parse_value(std::string_view v, std::size_t line) {
    if (v.empty() || v.front() != '[') return parse_scalar(v, line);
    if (v.back() != ']') fail(line, "unterminated array");
    json arr = json::array();
    const auto body = v.substr(1, v.size() - 2);
    bool in_string = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
        if (i < body.size()) {
            const char c = body[i];
            if (in_string && c == '\\') {
                ++i;
                continue;
            }
            if (c == '"') in_string = !in_string;
            if (c == '[' && !in_string) fail(line, "nested arrays are not supported");
            if (c != ',' || in_string) continue;
        }
        const auto item = trim(body.substr(start, i - start));
        start = i + 1;
        if (item.empty()) {
            if (i == body.size()) break;  // trailing comma or empty array
            fail(line, "empty array element");
        }
        arr.push_back(parse_scalar(item, line));
    }
    return arr;
}

// Reads typed keys from one section and remembers which were consumed.
class Section {
public:
    Section(const json& doc, std::string name) : name_(std::move(name)) {
        if (name_.empty()) {
            node_ = &doc;
        } else if (doc.contains(name_)) {
            node_ = &doc.at(name_);
            if (!node_->is_object()) throw ConfigError("'" + name_ + "' must be a section");
        }
    }

    template <typename T>
    void read(const char* key, T& dst) {
        const json* v = find(key);
        if (!v) return;
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v->is_boolean()) throw ConfigError("");
                dst = v->get<bool>();
            } else if constexpr (std::is_integral_v<T>) {
                if (!v->is_number_integer()) throw ConfigError("");
                const auto i = v->get<std::int64_t>();
                if (std::is_unsigned_v<T> && i < 0) throw ConfigError("");
                dst = static_cast<T>(i);
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v->is_number()) throw ConfigError("");
                dst = v->get<double>();
            } else {
                if (!v->is_string()) throw ConfigError("");
                dst = v->get<std::string>();
            }
        } catch (const ConfigError&) {
            throw ConfigError("wrong type for " + where(key));
        }
    }

    const json* find(const char* key) {
        if (!node_ || !node_->contains(key)) return nullptr;
        used_.insert(key);
        return &node_->at(key);
    }

    std::string where(const char* key) const { return name_.empty() ? std::string(key) : "[" + name_ + "]." + key; }

    void reject_unknown(const std::set<std::string>& sections = {}) const {
        if (!node_) return;
        for (const auto& [k, v] : node_->items()) {
            if (!used_.contains(k) && !sections.contains(k)) {
                throw ConfigError("unknown config key " + (name_.empty() ? k : "[" + name_ + "]." + k));
            }
        }
    }

private:
    const json* node_ = nullptr;
    std::string name_;
    std::set<std::string> used_;
};

}  // namespace

nlohmann::json parse_toml_subset(std::string_view text) {
    json doc = json::object();
    json* current = &doc;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        const auto line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed section header");
            const auto name = trim(line.substr(1, line.size() - 2));
            if (!is_bare_key(name)) fail(line_no, "bad section name");
            if (doc.contains(std::string(name))) fail(line_no, "duplicate section [" + std::string(name) + "]");
            doc[std::string(name)] = json::object();
            current = &doc[std::string(name)];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(line_no, "expected key = value");
        const auto key = trim(line.substr(0, eq));
        if (!is_bare_key(key)) fail(line_no, "bad key '" + std::string(key) + "'");
        if (current->contains(std::string(key))) fail(line_no, "duplicate key '" + std::string(key) + "'");
        (*current)[std::string(key)] = parse_value(trim(line.substr(eq + 1)), line_no);
    }
    return doc;
}

RunConfig resolve_config(const nlohmann::json& doc, const Overrides& overrides) {
    if (!doc.is_object()) throw ConfigError("config document must be a table");
    static const std::set<std::string> kSections{"synth", "data", "train", "cart", "eval"};
    RunConfig c;

    Section root(doc, "");
    std::optional<std::uint64_t> seed;
    if (root.find("seed")) {
        std::uint64_t s = 0;
        root.read("seed", s);
        seed = s;
    }
    root.reject_unknown(kSections);
    if (overrides.seed) seed = overrides.seed;
    if (!seed) throw ConfigError("config: seed is required (set seed = ... or pass --seed)");
    c.seed = *seed;

    Section synth(doc, "synth");
    synth.read("num_papers", c.synth.num_papers);
    synth.read("mu_lambda", c.synth.mu_lambda);
    synth.read("sigma_lambda", c.synth.sigma_lambda);
    synth.read("mu_aging", c.synth.mu_aging);
    synth.read("sigma_aging", c.synth.sigma_aging);
    synth.read("m", c.synth.m);
    synth.read("start_year", c.synth.start_year);
    synth.read("max_years", c.synth.max_years);
    synth.read("pub_span", c.synth.pub_span);
    synth.read("constant_aging", c.synth.constant_aging);
    synth.reject_unknown();
    c.synth.seed = c.seed;

    Section data(doc, "data");
    int train_years = 5, horizon = 5;
    data.read("train_years", train_years);
    data.read("horizon", horizon);
    data.read("min_citations", c.cohort.min_citations);
    data.read("strict_threshold", c.cohort.strict);
    if (const auto* f = data.find("features")) {
        if (!f->is_array()) throw ConfigError("[data].features must be an array of names");
        c.features.features.clear();
        for (const auto& name : *f) {
            if (!name.is_string()) throw ConfigError("[data].features must be an array of names");
            c.features.features.push_back(data::feature_from_name(name.get<std::string>()));
        }
    }
    data.read("train_fraction", c.split.train);
    data.read("validation_fraction", c.split.validation);
    data.read("test_fraction", c.split.test);
    data.read("skip_malformed", c.skip_malformed);
    data.reject_unknown();
    if (overrides.train_years) train_years = *overrides.train_years;
    if (overrides.horizon) horizon = *overrides.horizon;
    c.cohort.train_years = train_years;
    c.cohort.horizon = horizon;
    c.features.train_years = train_years;
    c.split.seed = c.seed;

    Section train(doc, "train");
    train.read("epochs", c.train.epochs);
    train.read("batch_size", c.train.batch_size);
    train.read("learning_rate", c.train.learning_rate);
    train.read("clip_norm", c.train.clip_norm);
    train.read("hidden_dim", c.train.hidden_dim);
    train.read("patience", c.train.patience);
    train.read("num_bins", c.train.bins.num_bins);
    train.read("bin_low", c.train.bins.low);
    train.read("bin_high", c.train.bins.high);
    train.reject_unknown();
    if (overrides.epochs) c.train.epochs = *overrides.epochs;
    c.train.features = c.features;
    c.train.seed = c.seed;

    Section cart(doc, "cart");
    cart.read("max_depth", c.cart.max_depth);
    cart.read("min_leaf", c.cart.min_leaf);
    cart.reject_unknown();

    Section ev(doc, "eval");
    ev.read("epsilon", c.eval.epsilon);
    if (const auto* h = ev.find("horizons")) {
        if (!h->is_array()) throw ConfigError("[eval].horizons must be an array of integers");
        c.eval.horizons.clear();
        for (const auto& t : *h) {
            if (!t.is_number_integer()) throw ConfigError("[eval].horizons must be an array of integers");
            c.eval.horizons.push_back(t.get<int>());
        }
    } else {
        c.eval.horizons.clear();
        for (int t = 1; t <= horizon; ++t) c.eval.horizons.push_back(t);
    }
    std::string rounding = "none";
    ev.read("rounding", rounding);
    c.eval.rounding = eval::rounding_from_name(rounding);
    ev.read("histogram_bins", c.histogram_bins);
    ev.reject_unknown();
    if (overrides.epsilon) c.eval.epsilon = *overrides.epsilon;

    c.synth.validate();
    c.cohort.validate();
    c.features.validate();
    c.split.validate();
    c.train.validate();
    c.eval.validate();
    if (c.eval.horizons.back() > horizon) throw ConfigError("[eval].horizons exceed [data].horizon");
    if (c.cart.max_depth < 0 || c.cart.min_leaf == 0) throw ConfigError("[cart] needs max_depth >= 0 and min_leaf >= 1");
    if (c.histogram_bins == 0) throw ConfigError("[eval].histogram_bins must be positive");
    return c;
}

RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw MissingInputError("config file not found: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return resolve_config(parse_toml_subset(buf.str()), overrides);
}

nlohmann::json to_json(const RunConfig& c) {
    return {
        {"seed", c.seed},
        {"synth",
         {{"num_papers", c.synth.num_papers},
          {"mu_lambda", c.synth.mu_lambda},
          {"sigma_lambda", c.synth.sigma_lambda},
          {"mu_aging", c.synth.mu_aging},
          {"sigma_aging", c.synth.sigma_aging},
          {"m", c.synth.m},
          {"start_year", c.synth.start_year},
          {"max_years", c.synth.max_years},
          {"pub_span", c.synth.pub_span},
          {"constant_aging", c.synth.constant_aging}}},
        {"data",
         {{"train_years", c.cohort.train_years},
          {"horizon", c.cohort.horizon},
          {"min_citations", c.cohort.min_citations},
          {"strict_threshold", c.cohort.strict},
          {"features", c.features.names()},
          {"train_fraction", c.split.train},
          {"validation_fraction", c.split.validation},
          {"test_fraction", c.split.test},
          {"skip_malformed", c.skip_malformed}}},
        {"train",
         {{"epochs", c.train.epochs},
          {"batch_size", c.train.batch_size},
          {"learning_rate", c.train.learning_rate},
          {"clip_norm", c.train.clip_norm},
          {"hidden_dim", c.train.hidden_dim},
          {"patience", c.train.patience},
          {"num_bins", c.train.bins.num_bins},
          {"bin_low", c.train.bins.low},
          {"bin_high", c.train.bins.high}}},
        {"cart", {{"max_depth", c.cart.max_depth}, {"min_leaf", c.cart.min_leaf}}},
        {"eval",
         {{"epsilon", c.eval.epsilon},
          {"horizons", c.eval.horizons},
          {"rounding", eval::rounding_name(c.eval.rounding)},
          {"histogram_bins", c.histogram_bins}}},
    };
}

}  // namespace ltccp::cli
