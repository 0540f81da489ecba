#include "kppw/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace kppw {

std::string format_number(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 15);
    return std::string(buf, res.ptr);
}

nlohmann::json spec_to_json(const ProblemSpec& spec)
{
    return nlohmann::json{{"family", spec.family}, {"k", spec.k},      {"l", spec.l},
                          {"s_t", spec.sign_t},   {"s_x", spec.sign_x}, {"n", spec.n},
                          {"label", spec.label},  {"order", spec.order()}};
}

nlohmann::json catalog_to_json()
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : catalog())
        arr.push_back(spec_to_json(s));
    return nlohmann::json{{"catalog", arr}};
}

nlohmann::json char_summary_to_json(const CharSummary& s)
{
    nlohmann::json roots = nlohmann::json::array();
    for (const auto& r : s.roots)
        roots.push_back({{"re", r.real()}, {"im", r.imag()}});
    return nlohmann::json{{"equilibrium", s.equilibrium}, {"roots", roots},
                          {"n_minus", s.n_minus},         {"n_plus", s.n_plus},
                          {"n_center", s.n_center},       {"tol_center", s.tol_center}};
}

nlohmann::json bundles_to_json(const BundleSummary& b)
{
    return nlohmann::json{{"at_equilibrium_0", char_summary_to_json(b.at_zero)},
                          {"at_equilibrium_1", char_summary_to_json(b.at_one)},
                          {"shooting_balance", b.shooting_balance}};
}

nlohmann::json branch_to_json(const ContinuationBranch& b)
{
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : b.records)
        recs.push_back({{"lambda", r.lambda},
                        {"converged", r.converged},
                        {"best_residual", r.best_residual}});
    nlohmann::json j{{"spec", spec_to_json(b.spec)}, {"records", recs}};
    if (b.lambda_max_bracket)
        j["lambda_max_bracket"] = {b.lambda_max_bracket->first, b.lambda_max_bracket->second};
    return j;
}

namespace {

std::string values_csv(const std::vector<double>& y, const Eigen::MatrixXd& values,
                       const std::string& base)
{
    std::string out = "y";
    for (int c = 0; c < values.cols(); ++c)
        out += "," + (c == 0 ? base : base + std::to_string(c));
    out += "\n";
    for (int i = 0; i < values.rows(); ++i) {
        out += format_number(y[i]);
        for (int c = 0; c < values.cols(); ++c)
            out += "," + format_number(values(i, c));
        out += "\n";
    }
    return out;
}

nlohmann::json diagnostics_json(const SolveDiagnostics& d)
{
    return nlohmann::json{
        {"newton_iters", d.newton_iters},
        {"final_residual_norm", d.final_residual_norm},
        {"bc_mode", d.bc_mode == BcMode::Projection ? "projection" : "dirichlet"},
        {"phase_pinned", d.phase_pinned},
        {"mesh_refinements", d.mesh_refinements},
        {"artificial_boundary_node", d.artificial_boundary_node}};
}

} // namespace

std::string profile_csv(const WaveProfile& p)
{
    return values_csv(p.mesh.points, p.values, "f");
}

std::string quasi_csv(const QuasiProfile& p)
{
    return values_csv(p.mesh.points, p.values, "F");
}

nlohmann::json profile_sidecar(const WaveProfile& p, const nlohmann::json& config)
{
    return nlohmann::json{{"spec", spec_to_json(p.spec)},
                          {"lambda", p.lambda},
                          {"domain", {p.mesh.left(), p.mesh.right()}},
                          {"intervals", p.mesh.intervals()},
                          {"diagnostics", diagnostics_json(p.diagnostics)},
                          {"config", config}};
}

nlohmann::json quasi_sidecar(const QuasiProfile& p, const nlohmann::json& config)
{
    nlohmann::json j{{"n", p.n},
                     {"lambda", p.lambda},
                     {"delta", p.delta},
                     {"domain", {p.mesh.left(), p.mesh.right()}},
                     {"intervals", p.mesh.intervals()},
                     {"diagnostics", diagnostics_json(p.diagnostics)},
                     {"config", config}};
    if (p.interface_y0)
        j["interface_y0"] = *p.interface_y0;
    return j;
}

std::string profile_svg(const std::vector<double>& y, const std::vector<double>& f,
                        const std::string& title)
{
    const double W = 900, H = 480, m = 50;
    double ymin = *std::min_element(f.begin(), f.end());
    double ymax = *std::max_element(f.begin(), f.end());
    if (ymax - ymin < 1e-12) {
        ymin -= 1;
        ymax += 1;
    }
    const double x0 = y.front(), x1 = y.back();
    auto px = [&](double x) { return m + (x - x0) / (x1 - x0) * (W - 2 * m); };
    auto py = [&](double v) { return H - m - (v - ymin) / (ymax - ymin) * (H - 2 * m); };

    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    format_number(W) + "\" height=\"" + format_number(H) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + format_number(W / 2) + "\" y=\"20\" text-anchor=\"middle\">" +
         title + "</text>\n";
    if (ymin < 0 && ymax > 0)
        s += "<line x1=\"" + format_number(px(x0)) + "\" y1=\"" + format_number(py(0)) +
             "\" x2=\"" + format_number(px(x1)) + "\" y2=\"" + format_number(py(0)) +
             "\" stroke=\"#bbb\"/>\n";
    s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < y.size(); ++i)
        s += format_number(px(y[i])) + "," + format_number(py(f[i])) + " ";
    s += "\"/>\n</svg>\n";
    return s;
}

void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path);
    out << contents;
}

} // namespace kppw
