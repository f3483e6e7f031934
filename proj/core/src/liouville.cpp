#include "flab/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace flab {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Eigen::MatrixXd json_matrix(const nlohmann::json& j)
{
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    return m;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

LiouvilleData liouville(const PointGeometry& geo)
{
    const int n = geo.n();
    LiouvilleData d;
    d.at = geo.point();
    d.t = geo.t_value();
    d.t_metric = Eigen::VectorXd(n);
    for (int k = 0; k < n; ++k) d.t_metric[k] = geo.t_metric(k).value();
    d.Gamma = values(geo.Gamma());
    d.xi = values(geo.xi());
    d.consistency = geo.F_value() * (d.t - d.t_metric).cwiseAbs().maxCoeff();
    return d;
}

BarFrame bar_frame(const PointGeometry& geo)
{
    const int n = geo.n();
    BarFrame b;
    b.dropped = geo.dropped();
    b.kept = geo.kept();
    b.full = Eigen::MatrixXd(n, n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) b.full(k, i) = geo.dbar(k)[n + i].value();
    b.E = Eigen::MatrixXd(n - 1, n);
    for (int a = 0; a < n - 1; ++a) b.E.row(a) = b.full.row(b.kept[a]);
    return b;
}

BarFrameResiduals bar_frame_residuals(const PointGeometry& geo, const BarFrame& bar)
{
    const int n = geo.n();
    BarFrameResiduals r;
    if (n > 1) {
        const Eigen::JacobiSVD<Eigen::MatrixXd> svd(bar.E);
        const auto& sv = svd.singularValues();
        r.rank_ratio = sv[sv.size() - 1] / sv[0];
    } else {
        r.rank_ratio = 1.0;
    }
    const Eigen::VectorXd gy = geo.g_value() * geo.y_value();
    r.orthogonality = (bar.full * gy).cwiseAbs().maxCoeff() / geo.F_value();
    const int m = bar.dropped;
    Eigen::VectorXd rel = bar.full.row(m).transpose();
    for (int a : bar.kept) rel += (geo.y_value()[a] / geo.y_value()[m]) * bar.full.row(a).transpose();
    r.dependence = rel.cwiseAbs().maxCoeff();
    return r;
}

double TIdentityResiduals::max() const
{
    return std::max({y_dot_t, y_dot_dbar, dt_dy, gamma_t, contracted_dt, contracted_gamma_t});
}

TIdentityResiduals t_identities(const PointGeometry& geo)
{
    const int n = geo.n();
    const Eigen::VectorXd& y = geo.y_value();
    const Eigen::VectorXd& t = geo.t_value();
    const double F = geo.F_value();
    const double F2 = F * F;
    TIdentityResiduals r;

    r.y_dot_t = std::abs(y.dot(t) - 1.0);

    Eigen::VectorXd ydbar = Eigen::VectorXd::Zero(2 * n);
    for (int i = 0; i < n; ++i) ydbar += y[i] * values(geo.dbar(i));
    r.y_dot_dbar = ydbar.cwiseAbs().maxCoeff() / y.norm();

    Eigen::VectorXd gamma_t(n);
    for (int k = 0; k < n; ++k) gamma_t[k] = directional(geo.Gamma(), geo.t(k)).value();

    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            const double lhs = geo.t(l).derivative({n + k});
            r.dt_dy = std::max(r.dt_dy, F2 * std::abs(lhs + 2.0 * t[k] * t[l] - geo.g_value()(k, l) / F2));
        }
        r.gamma_t = std::max(r.gamma_t, F * std::abs(gamma_t[k] + t[k]));
        double contracted = 0.0;
        for (int j = 0; j < n; ++j) contracted += y[j] * geo.t(j).derivative({n + k});
        r.contracted_dt = std::max(r.contracted_dt, F * std::abs(contracted + t[k]));
    }
    r.contracted_gamma_t = std::abs(y.dot(gamma_t) + 1.0);
    return r;
}

BarBracketResiduals bar_brackets(const PointGeometry& geo)
{
    const int n = geo.n();
    const Eigen::VectorXd& t = geo.t_value();
    std::vector<Eigen::VectorXd> dbar;
    for (int i = 0; i < n; ++i) dbar.push_back(values(geo.dbar(i)));
    BarBracketResiduals r;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Eigen::VectorXd lhs = bracket_value(geo.dbar(i), geo.dbar(j));
            const Eigen::VectorXd rhs = t[i] * dbar[j] - t[j] * dbar[i];
            r.dbar_dbar = std::max(r.dbar_dbar, geo.F_value() * (lhs - rhs).cwiseAbs().maxCoeff());
        }
        const Eigen::VectorXd lhs = bracket_value(geo.dbar(i), geo.Gamma());
        r.dbar_gamma = std::max(r.dbar_gamma, (lhs - dbar[i]).cwiseAbs().maxCoeff());
    }
    return r;
}

std::vector<FramePack::Block> FramePack::blocks() const
{
    const int m = static_cast<int>(kept.size());
    return {{"L'_xi", 0, m}, {"L_xi", m, 1}, {"L'_Gamma", m + 1, m}, {"L_Gamma", 2 * m + 1, 1}};
}

std::vector<int> FramePack::perp_columns() const
{
    std::vector<int> cols;
    for (int c = 0; c < static_cast<int>(matrix.cols()) - 1; ++c) cols.push_back(c);
    return cols;
}

FramePack frame_pack(const PointGeometry& geo)
{
    const int n = geo.n();
    FramePack pack;
    pack.dropped = geo.dropped();
    pack.kept = geo.kept();
    pack.matrix = Eigen::MatrixXd(2 * n, 2 * n);
    int col = 0;
    for (int a : pack.kept) pack.matrix.col(col++) = values(geo.deltabar(a));
    pack.matrix.col(col++) = values(geo.xi());
    for (int a : pack.kept) pack.matrix.col(col++) = values(geo.dbar(a));
    pack.matrix.col(col++) = values(geo.Gamma());
    pack.gram = pack.matrix.transpose() * geo.sasaki_coordinate() * pack.matrix;

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(pack.matrix);
    const auto& sv = svd.singularValues();
    pack.condition = sv[0] / sv[sv.size() - 1];
    pack.metric_condition = geo.metric_condition();
    if (!(pack.condition <= kFramePackConditionWarning)) {
        std::ostringstream os;
        os << "frame pack condition number " << pack.condition << " exceeds " << kFramePackConditionWarning << " at "
           << geo.point().describe();
        pack.warnings.push_back(os.str());
    }
    return pack;
}

FramePackResiduals frame_pack_residuals(const PointGeometry& geo, const FramePack& pack)
{
    FramePackResiduals r;
    const double F2 = geo.F_value() * geo.F_value();
    const auto blocks = pack.blocks();
    std::vector<int> block_of(static_cast<std::size_t>(pack.matrix.cols()));
    for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
        for (int c = blocks[b].begin; c < blocks[b].begin + blocks[b].size; ++c) block_of[c] = b;
    for (Eigen::Index p = 0; p < pack.gram.rows(); ++p)
        for (Eigen::Index q = 0; q < pack.gram.cols(); ++q)
            if (block_of[p] != block_of[q]) r.gram_off_block = std::max(r.gram_off_block, std::abs(pack.gram(p, q)) / F2);

    const int m = static_cast<int>(pack.kept.size());
    const double ynorm = geo.y_value().norm();
    for (int a = 0; a < m; ++a) {
        const Eigen::VectorXd Jd = geo.J(pack.matrix.col(m + 1 + a));
        r.j_images = std::max(r.j_images, (Jd - pack.matrix.col(a)).cwiseAbs().maxCoeff());
    }
    const Eigen::VectorXd Jg = geo.J(pack.matrix.col(2 * m + 1));
    r.j_images = std::max(r.j_images, (Jg - pack.matrix.col(m)).cwiseAbs().maxCoeff() / ynorm);

    r.norms = std::max(std::abs(pack.gram(m, m) - F2), std::abs(pack.gram(2 * m + 1, 2 * m + 1) - F2)) / F2;
    for (int c : pack.perp_columns())
        r.perp_to_gamma = std::max(r.perp_to_gamma, std::abs(pack.gram(c, 2 * m + 1)) / F2);
    return r;
}

double bracket_leakage(const PointGeometry& geo, const std::vector<JetVector>& span)
{
    const int d = static_cast<int>(span.size());
    if (d < 2) return 0.0;
    const Eigen::MatrixXd& Gc = geo.sasaki_coordinate();
    Eigen::MatrixXd S(geo.dim(), d);
    for (int c = 0; c < d; ++c) S.col(c) = values(span[c]);
    const Eigen::MatrixXd gram = S.transpose() * Gc * S;
    const Eigen::LDLT<Eigen::MatrixXd> solver(gram);
    double worst = 0.0;
    for (int p = 0; p < d; ++p)
        for (int q = p + 1; q < d; ++q) {
            const Eigen::VectorXd b = bracket_value(span[p], span[q]);
            const Eigen::VectorXd coeff = solver.solve(S.transpose() * Gc * b);
            const Eigen::VectorXd off = b - S * coeff;
            const double scale = std::max(1.0, geo.sasaki_norm(b));
            worst = std::max(worst, geo.sasaki_norm(off) / scale);
        }
    return worst;
}

FrobeniusReport frobenius_checks(const PointGeometry& geo)
{
    const int n = geo.n();
    std::vector<JetVector> vertical, indicatrix, perp;
    for (int i = 0; i < n; ++i) vertical.push_back(geo.dy(i));
    for (int a : geo.kept()) indicatrix.push_back(geo.dbar(a));
    for (int i = 0; i < n; ++i) perp.push_back(geo.delta(i));
    perp.insert(perp.end(), indicatrix.begin(), indicatrix.end());

    FrobeniusReport r;
    r.entries.push_back({"V", bracket_leakage(geo, vertical)});
    r.entries.push_back({"L'_Gamma", bracket_leakage(geo, indicatrix)});
    r.entries.push_back({"L_Gamma^perp", bracket_leakage(geo, perp)});
    r.entries.push_back({"L_Gamma", bracket_leakage(geo, {geo.Gamma()})});
    r.entries.push_back({"L_xi", bracket_leakage(geo, {geo.xi()})});
    r.entries.push_back({"L_Gamma+L_xi", bracket_leakage(geo, {geo.Gamma(), geo.xi()})});
    return r;
}

nlohmann::json frame_dump(const PointGeometry& geo, const FramePack& pack)
{
    nlohmann::json j;
    j["metric"] = geo.metric().id();
    j["point"] = {{"x", geo.point().x()}, {"y", geo.point().y()}};
    j["dropped"] = pack.dropped + 1;
    std::vector<int> kept1;
    for (int a : pack.kept) kept1.push_back(a + 1);
    j["kept"] = kept1;
    std::vector<std::string> labels;
    for (int a : kept1) labels.push_back("deltabar_" + std::to_string(a));
    labels.push_back("xi");
    for (int a : kept1) labels.push_back("dbar_" + std::to_string(a));
    labels.push_back("Gamma");
    j["columns"] = labels;
    j["pack"] = matrix_json(pack.matrix);
    j["gram"] = matrix_json(pack.gram);
    j["condition"] = {{"pack", pack.condition}, {"metric", pack.metric_condition}};
    nlohmann::json blocks = nlohmann::json::array();
    for (const auto& b : pack.blocks()) blocks.push_back({{"tag", b.tag}, {"begin", b.begin}, {"size", b.size}});
    j["blocks"] = blocks;
    j["warnings"] = pack.warnings;
    return j;
}

FramePack parse_frame_dump(const nlohmann::json& dump)
{
    FramePack pack;
    pack.matrix = json_matrix(dump.at("pack"));
    pack.gram = json_matrix(dump.at("gram"));
    pack.dropped = dump.at("dropped").get<int>() - 1;
    for (int a : dump.at("kept").get<std::vector<int>>()) pack.kept.push_back(a - 1);
    pack.condition = dump.at("condition").at("pack").get<double>();
    pack.metric_condition = dump.at("condition").at("metric").get<double>();
    pack.warnings = dump.at("warnings").get<std::vector<std::string>>();
    return pack;
}

double reverify_frame_dump(const nlohmann::json& dump, const FinslerMetric& M)
{
    const FramePack parsed = parse_frame_dump(dump);
    const TangentPoint p(dump.at("point").at("x").get<std::vector<double>>(),
                         dump.at("point").at("y").get<std::vector<double>>());
    const PointGeometry geo(M, p);
    const FramePack fresh = frame_pack(geo);
    if (fresh.dropped != parsed.dropped || fresh.kept != parsed.kept) return std::numeric_limits<double>::infinity();
    return std::max(max_abs(fresh.matrix - parsed.matrix), max_abs(fresh.gram - parsed.gram));
}

} // namespace flab
