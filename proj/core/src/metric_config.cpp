#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "flab/metric.hpp"
#include "flab/sampling.hpp"

namespace flab {

namespace {

using nlohmann::json;

constexpr std::uint64_t kProbeSeed = 0x9b0be5eedULL;
constexpr int kProbeCount = 8;

Polynomial parse_poly(const json& j, int n, const std::string& where)
{
    if (j.is_number()) return Polynomial(n, j.get<double>());
    if (!j.is_object() || !j.contains("poly") || j.size() != 1)
        throw ConfigError(where + ": expected a number or {\"poly\": [[coef, e1, ..., en], ...]}");
    const json& terms = j.at("poly");
    if (!terms.is_array()) throw ConfigError(where + ".poly: expected an array of terms");
    std::vector<Polynomial::Term> out;
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const json& term = terms[t];
        const std::string at = where + ".poly[" + std::to_string(t) + "]";
        if (!term.is_array() || static_cast<int>(term.size()) != n + 1)
            throw ConfigError(at + ": dimension mismatch, expected [coef, e1, ..., e" + std::to_string(n) + "]");
        if (!term[0].is_number()) throw ConfigError(at + ": coefficient must be a number");
        Polynomial::Term pt{term[0].get<double>(), std::vector<int>(n)};
        int degree = 0;
        for (int v = 0; v < n; ++v) {
            if (!term[v + 1].is_number_integer() || term[v + 1].get<int>() < 0)
                throw ConfigError(at + ": exponents must be non-negative integers");
            pt.exps[v] = term[v + 1].get<int>();
            degree += pt.exps[v];
        }
        if (degree > 3) throw ConfigError(at + ": polynomial degree " + std::to_string(degree) + " exceeds 3");
        out.push_back(std::move(pt));
    }
    return Polynomial(n, std::move(out));
}

bool same_poly(const Polynomial& p, const Polynomial& q)
{
    auto key = [](const Polynomial& r) {
        std::map<std::vector<int>, double> m;
        for (const auto& t : r.terms()) m[t.exps] += t.coef;
        std::erase_if(m, [](const auto& kv) { return kv.second == 0.0; });
        return m;
    };
    return key(p) == key(q);
}

PolyMatrix parse_matrix(const json& j, int n)
{
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw ConfigError("a: dimension mismatch, expected " + std::to_string(n) + " rows");
    PolyMatrix a(n);
    for (int i = 0; i < n; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != n)
            throw ConfigError("a[" + std::to_string(i) + "]: dimension mismatch, expected " + std::to_string(n) +
                              " entries");
        for (int k = 0; k < n; ++k)
            a[i].push_back(parse_poly(j[i][k], n, "a[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
    }
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
            if (!same_poly(a[i][k], a[k][i]))
                throw ConfigError("a: matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(k) + ")");
    return a;
}

PolyVector parse_vector(const json& j, int n)
{
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw ConfigError("b: dimension mismatch, expected " + std::to_string(n) + " entries");
    PolyVector b;
    for (int i = 0; i < n; ++i) b.push_back(parse_poly(j[i], n, "b[" + std::to_string(i) + "]"));
    return b;
}

DomainBox parse_domain(const json& j, int n)
{
    if (!j.is_object()) throw ConfigError("domain: expected {\"lo\": [...], \"hi\": [...]}");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "lo" && it.key() != "hi") throw ConfigError("domain: unknown field '" + it.key() + "'");
    DomainBox box;
    for (const char* key : {"lo", "hi"}) {
        if (!j.contains(key)) throw ConfigError(std::string("domain.") + key + ": missing");
        const json& v = j.at(key);
        if (!v.is_array() || static_cast<int>(v.size()) != n)
            throw ConfigError(std::string("domain.") + key + ": dimension mismatch, expected " + std::to_string(n));
        std::vector<double> vals;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(std::string("domain.") + key + ": entries must be numbers");
            vals.push_back(e.get<double>());
        }
        (std::string(key) == "lo" ? box.lo : box.hi) = std::move(vals);
    }
    for (int i = 0; i < n; ++i)
        if (!(box.lo[i] < box.hi[i])) throw ConfigError("domain: lo must be below hi in every coordinate");
    return box;
}

std::string point_text(const TangentPoint& p) { return p.describe(); }

void probe(const FinslerMetric& m, std::vector<std::string>& warnings)
{
    const int n = m.dimension();
    SplitMix64 rng(kProbeSeed);
    for (int k = 0; k < kProbeCount; ++k) {
        const TangentPoint p = sample_point(rng, n, m.domain());
        if (m.family() == MetricFamily::randers) {
            Eigen::MatrixXd a(n, n);
            Eigen::VectorXd b(n);
            for (int i = 0; i < n; ++i) {
                b[i] = m.b()[i](p.x());
                for (int j = 0; j < n; ++j) a(i, j) = m.a()[i][j](p.x());
            }
            Eigen::LLT<Eigen::MatrixXd> llt(a);
            if (llt.info() != Eigen::Success)
                throw ConfigError("a: not positive definite at probe point " + point_text(p));
            const double bnorm = std::sqrt(b.dot(llt.solve(b)));
            if (!(bnorm < 1.0)) {
                std::ostringstream os;
                os << "b: |b|_a = " << bnorm << " >= 1 at probe point " << point_text(p)
                   << "; indicatrix convexity violated";
                throw ConfigError(os.str());
            }
        }
        double F = 0.0;
        try {
            F = m.F(p);
        } catch (const SingularEvaluation& e) {
            throw ConfigError(std::string("F cannot be evaluated at probe point ") + point_text(p) + ": " + e.what());
        }
        if (!(F > 0.0)) throw ConfigError("F is not positive at probe point " + point_text(p));
        try {
            fundamental_tensor(m, p);
        } catch (const Error& e) {
            throw ConfigError(std::string("fundamental tensor not positive definite; indicatrix convexity violated: ") +
                              e.what());
        }
        for (double lambda : {0.5, 2.0, 3.7}) {
            std::vector<double> ly = p.y();
            for (double& v : ly) v *= lambda;
            const double lhs = m.F(p.x(), ly);
            if (std::abs(lhs - lambda * F) > 1e-10 * lambda * F) {
                std::ostringstream os;
                os << "homogeneity check failed for lambda = " << lambda << " at " << point_text(p);
                warnings.push_back(os.str());
            }
        }
    }
}

} // namespace

LoadedMetric load_metric(const json& config)
{
    if (!config.is_object()) throw ConfigError("metric config: expected a JSON object");
    static const std::set<std::string> known = {"id", "family", "n", "a", "b", "domain"};
    for (auto it = config.begin(); it != config.end(); ++it)
        if (!known.count(it.key())) throw ConfigError("unknown field '" + it.key() + "'");
    if (!config.contains("family") || !config.at("family").is_string())
        throw ConfigError("family: missing or not a string");
    if (!config.contains("n") || !config.at("n").is_number_integer() || config.at("n").get<int>() < 1)
        throw ConfigError("n: missing or not a positive integer");
    const std::string family = config.at("family").get<std::string>();
    const int n = config.at("n").get<int>();

    auto forbid = [&](const char* key) {
        if (config.contains(key))
            throw ConfigError(std::string("field '") + key + "' is not allowed for family " + family);
    };
    auto require = [&](const char* key) -> const json& {
        if (!config.contains(key)) throw ConfigError(std::string(key) + ": required for family " + family);
        return config.at(key);
    };

    LoadedMetric out;
    if (family == "euclidean") {
        forbid("a");
        forbid("b");
        out.metric = FinslerMetric::euclidean(n);
    } else if (family == "riemannian") {
        forbid("b");
        out.metric = FinslerMetric::riemannian(parse_matrix(require("a"), n));
    } else if (family == "randers") {
        out.metric = FinslerMetric::randers(parse_matrix(require("a"), n), parse_vector(require("b"), n));
    } else {
        throw ConfigError("family: unknown family '" + family + "'");
    }
    if (config.contains("id")) {
        if (!config.at("id").is_string()) throw ConfigError("id: must be a string");
        out.metric.set_id(config.at("id").get<std::string>());
    }
    if (config.contains("domain")) out.metric.set_domain(parse_domain(config.at("domain"), n));
    for (int i = 0; i < n; ++i)
        if (out.metric.domain().lo[i] > 1.0 || out.metric.domain().hi[i] < -1.0)
            throw ConfigError("domain: box does not meet the sampling cube [-1, 1]^n");
    probe(out.metric, out.warnings);
    return out;
}

LoadedMetric load_metric_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open metric config '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("parse error in '" + path + "': " + e.what());
    }
    return load_metric(j);
}

} // namespace flab
