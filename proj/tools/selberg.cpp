// Command-line front end.  Exit status: 0 all checks pass, 1 a check failed,
// 2 bad usage or input.

#include <selberg/dirichlet.hpp>
#include <selberg/errors.hpp>
#include <selberg/greens.hpp>
#include <selberg/group.hpp>
#include <selberg/report.hpp>
#include <selberg/testfn.hpp>
#include <selberg/trace.hpp>
#include <selberg/zeta.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

namespace {

using namespace selberg;
using cx = std::complex<double>;
constexpr double pi = std::numbers::pi;

struct Config {
    std::string group;
    std::string family = "gaussian";
    double beta = 1.0;
    double ell = 2.0;
    std::string s_text = "2";
    std::optional<std::string> rho_text, rho_star_text;
    std::optional<double> max_length;
    int l_max = -1;
    int n_max = 64;
    int m_max = -1;
    std::optional<double> tol;
    std::string out = "-";
    std::string format = "csv";
    int threads = 1;
    double length = 7.0;
    double width = 1.0;
};

cx parse_complex(const std::string& text, const char* flag) {
    std::stringstream ss(text);
    std::string re, im;
    std::getline(ss, re, ',');
    std::getline(ss, im);
    try {
        std::size_t used = 0;
        const double r = std::stod(re, &used);
        if (used != re.size()) throw std::invalid_argument("trailing");
        double i = 0.0;
        if (!im.empty()) {
            i = std::stod(im, &used);
            if (used != im.size()) throw std::invalid_argument("trailing");
        }
        return {r, i};
    } catch (const std::exception&) {
        throw input_error(std::string(flag) + ": expected RE or RE,IM, got '" + text + "'");
    }
}

std::string num(double x) { return report::number(x); }

class Runner {
public:
    explicit Runner(const Config& c) : c_(c) {}

    std::vector<trace::TraceReport> rows;
    bool pass = true;

    void add(trace::TraceReport r, bool ok) {
        pass = pass && ok;
        rows.push_back(std::move(r));
    }

    double tol_or(double d) const { return c_.tol.value_or(d); }

    testfn::TestFunctionPair pair() const {
        if (c_.family == "gaussian") return testfn::gaussian_family(c_.beta);
        if (c_.family == "heat") return testfn::heat_family(c_.beta);
        if (c_.family == "resolvent") {
            const cx r = c_.rho_text ? parse_complex(*c_.rho_text, "--rho") : cx(0.0, -1.0);
            const cx rs = c_.rho_star_text ? parse_complex(*c_.rho_star_text, "--rho-star") : cx(0.0, -2.0);
            return testfn::resolvent_family(r, rs);
        }
        if (c_.family == "counting") return testfn::counting_family(bump(), c_.length);
        throw input_error("--family: unknown family '" + c_.family + "'");
    }
    std::string pair_params() const {
        if (c_.family == "counting") return "counting;length=" + num(c_.length) + ";width=" + num(c_.width);
        if (c_.family == "resolvent")
            return "resolvent;rho=" + c_.rho_text.value_or("0,-1") + ";rho_star=" + c_.rho_star_text.value_or("0,-2");
        return c_.family + ";beta=" + num(c_.beta);
    }
    testfn::Bump bump() const { return {-0.5 * c_.width, 0.5 * c_.width, 1.0}; }

    group::GroupSpec group() const {
        if (c_.group.empty()) throw input_error("--group is required for this command");
        return group::load_group(c_.group);
    }
    group::EnumerationOptions opts() const { return {c_.threads, 20'000'000}; }

    // ------------------------------------------------------------ checks

    void poisson() {
        auto r = trace::circle_check(pair());
        r.parameters = pair_params();
        add(r, r.abs_diff() < tol_or(1e-10));
    }

    void cot() {
        const cx rho = parse_complex(c_.rho_text.value_or("0.3"), "--rho");
        const auto [series, closed] = trace::cot_identity_check(rho);
        trace::TraceReport r;
        r.formula = "cot";
        r.parameters = "rho=" + num(rho.real()) + "," + num(rho.imag());
        r.spectral = series;
        r.geometric = closed;
        add(r, r.abs_diff() < tol_or(1e-10));
    }

    void sphere() {
        auto r = trace::sphere_check(pair(), c_.l_max);
        r.parameters = pair_params() + ";" + r.parameters.substr(r.parameters.find(';') + 1);
        add(r, r.abs_diff() < tol_or(1e-8));
    }

    void cylinder() {
        auto r = trace::cylinder_check(c_.ell, pair(), c_.n_max);
        r.parameters = pair_params() + ";" + r.parameters.substr(r.parameters.find(';') + 1);
        add(r, r.abs_diff() < tol_or(1e-8));
    }

    void transform() {
        // Legendre Q at ν = 0, τ = 1 against ln coth ½, then the Selberg transform residual.
        trace::TraceReport q;
        q.formula = "legendre-q";
        q.parameters = "nu=0;tau=1";
        const auto lq = greens::legendre_q(cx(0.0, -0.5), 1.0);
        q.spectral = cx(std::log(1.0 / std::tanh(0.5)));
        q.geometric = lq.value;
        q.truncation_bounds = {0.0, lq.error_estimate};
        add(q, q.abs_diff() < 1e-8);

        const auto p = pair();
        std::vector<double> rhos{0.0, 1.0};
        if (c_.rho_text) rhos = {parse_complex(*c_.rho_text, "--rho").real()};
        for (double rho : rhos) {
            const double res = greens::selberg_transform_check(p, rho, geom::HPoint::uhp({0.0, 1.0}));
            trace::TraceReport r;
            r.formula = "transform-residual";
            r.parameters = pair_params() + ";rho=" + num(rho) + ";z=0,1";
            r.geometric = res;
            add(r, res < tol_or(1e-4));
        }
    }

    // ------------------------------------------------------------ surfaces

    trace::SurfaceModel model(double default_L) const {
        return trace::SurfaceModel::from_group(group(), c_.max_length.value_or(default_L), opts());
    }

    void trace_surface() {
        const auto m = model(10.0);
        const auto p = pair();
        const double tol = tol_or(1e-6);
        const double a = m.area;

        greens::QuadratureConfig qc;
        const auto id_h = greens::identity_term(p, qc);
        const auto id_g = greens::identity_term_from_g(p, qc);
        trace::TraceReport ir;
        ir.formula = "surface-identity";
        ir.parameters = pair_params() + ";area=" + num(a);
        ir.spectral = a * id_h.value;
        ir.geometric = a * id_g.value;
        ir.truncation_bounds = {a * id_h.error_estimate, a * id_g.error_estimate};
        add(ir, ir.abs_diff() <= std::max(1e-8 * std::abs(*ir.spectral), 10.0 * ir.tail_bound()));

        const auto per = trace::surface_geometric_side(m, p, c_.n_max, tol, trace::Summation::per_class);
        const auto flat = trace::surface_geometric_side(m, p, c_.n_max, tol, trace::Summation::flattened);
        trace::TraceReport gr;
        gr.formula = "surface-geometric";
        gr.parameters = pair_params() + ";max_length=" + num(m.spectrum.cutoff) + ";n_max=" + std::to_string(c_.n_max);
        gr.geometric = per.value;
        gr.truncation_bounds = {0.0, per.tail_bound()};
        add(gr, per.tail_bound() <= tol);

        trace::TraceReport rg;
        rg.formula = "surface-regrouping";
        rg.parameters = gr.parameters;
        rg.spectral = per.geodesic;
        rg.geometric = flat.geodesic;
        add(rg, rg.abs_diff() <= 1e-12 * std::max(1.0, std::abs(per.geodesic)));
    }

    void weyl() {
        const auto m = model(6.0);
        const auto rep = trace::heat_weyl_report(m, {0.01, 0.02, 0.05});
        for (const auto& row : rep.rows) {
            trace::TraceReport r;
            r.formula = "weyl-heat";
            r.parameters = "beta=" + num(row.beta);
            r.spectral = row.leading;
            r.geometric = row.heat_trace;
            rows.push_back(r);
        }
        trace::TraceReport s;
        s.formula = "weyl-slope";
        s.parameters = "betas=0.01,0.02,0.05;area=" + num(m.area);
        s.spectral = m.area / (4.0 * pi);
        s.geometric = rep.slope;
        add(s, s.rel_diff() < tol_or(0.02));
    }

    void geodesic_count() {
        const auto psi = bump();
        const auto m = model(c_.length + psi.b);
        const auto cc = trace::geodesic_counting_check(m, psi, c_.length);
        trace::TraceReport r;
        r.formula = "geodesic-count";
        r.parameters = "length=" + num(c_.length) + ";width=" + num(c_.width);
        r.spectral = cc.smooth;
        r.geometric = cc.enumerated;
        const double ratio = cc.ratio();
        add(r, ratio >= 0.7 && ratio <= 1.3);
    }

    void length_spectrum_cmd(std::string& text) {
        const auto s = group::length_spectrum(group(), c_.max_length.value_or(5.0), 0.0, opts());
        text = report::render(s, fmt());
    }

    void zeta_cmd() {
        const cx s = parse_complex(c_.s_text, "--s");
        const auto g = group();
        const auto spec = group::length_spectrum(g, c_.max_length.value_or(8.0), 0.0, opts());
        const auto z = zeta::zeta_euler_product(s, spec, c_.m_max);
        trace::TraceReport zv;
        zv.formula = "zeta";
        zv.parameters = "s=" + num(s.real()) + "," + num(s.imag()) + ";max_length=" + num(spec.cutoff);
        zv.geometric = z.value;
        zv.truncation_bounds = {0.0, z.tail_bound};
        rows.push_back(zv);

        const auto [d, n] = zeta::log_derivative_check(s, spec, c_.m_max);
        trace::TraceReport lr;
        lr.formula = "zeta-log-derivative";
        lr.parameters = zv.parameters;
        lr.spectral = n;
        lr.geometric = d;
        // Both sides use the same classes; the bound is what the omitted classes could add to n_Γ.
        if (zeta::rho_of_s(s).imag() < -0.5)
            lr.truncation_bounds = {pi * zeta::n_gamma(zeta::rho_of_s(s), spec, c_.m_max).tail_bound, 0.0};
        add(lr, lr.abs_diff() < tol_or(1e-6));
    }

    void poles() {
        const int nmax = c_.n_max == 64 ? 2 : c_.n_max;  // 64 is the cylinder-sum default
        const int mmax = c_.m_max < 0 ? 2 : c_.m_max;
        for (const auto& p : zeta::scattering_poles(c_.ell, {-nmax, nmax}, {0, mmax})) {
            const int nu = int(std::lround(p.rho.real() * c_.ell / (2.0 * pi)));
            const int m = int(std::lround(p.rho.imag() - 0.5));
            trace::TraceReport r;
            r.formula = "scattering-pole";
            r.parameters = "ell=" + num(c_.ell) + ";nu=" + std::to_string(nu) + ";m=" + std::to_string(m) +
                           ";rho=" + num(p.rho.real()) + "," + num(p.rho.imag());
            r.spectral = p.residue;
            r.geometric = zeta::contour_residue(c_.ell, nu, m);
            add(r, r.abs_diff() < tol_or(1e-8));
        }
    }

    report::Format fmt() const {
        if (c_.format == "csv") return report::Format::csv;
        if (c_.format == "text") return report::Format::text;
        throw input_error("--format must be csv or text");
    }

private:
    const Config& c_;
};

void write(const std::string& text, const std::string& path) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw input_error("cannot write " + path);
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    Config c;
    CLI::App app{"Trace-formula checks for the hyperbolic plane, cylinders and compact surfaces"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--group", c.group, "group file (JSON; .json may be omitted)");
    app.add_option("--family", c.family, "test function: gaussian|heat|resolvent|counting");
    app.add_option("--beta", c.beta, "Gaussian / heat parameter");
    app.add_option("--ell", c.ell, "cylinder length");
    app.add_option("--s", c.s_text, "zeta argument RE[,IM]");
    app.add_option("--rho", c.rho_text, "spectral parameter RE[,IM]");
    app.add_option("--rho-star", c.rho_star_text, "second resolvent parameter RE[,IM]");
    app.add_option("--max-length", c.max_length, "length cutoff for the class enumeration");
    app.add_option("--l-max", c.l_max, "sphere spectral cutoff (default: from the tail bound)");
    app.add_option("--n-max", c.n_max, "repetition cutoff for cylinder/surface sums");
    app.add_option("--m-max", c.m_max, "cutoff of the m-sums (default: from the tail bound)");
    app.add_option("--tol", c.tol, "pass tolerance (default per check)");
    app.add_option("--out", c.out, "output file, - for stdout");
    app.add_option("--format", c.format, "csv|text");
    app.add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 1024));
    app.add_option("--length", c.length, "centre L of the counting bump");
    app.add_option("--width", c.width, "width of the counting bump")->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("check", "model-geometry checks");
    check->require_subcommand(1);
    check->fallthrough();
    auto* poisson = check->add_subcommand("poisson", "Poisson summation on the circle");
    auto* cot = check->add_subcommand("cot", "cotangent partial fractions");
    auto* sphere = check->add_subcommand("sphere", "sphere trace formula");
    auto* cylinder = check->add_subcommand("cylinder", "hyperbolic cylinder trace formula");
    auto* transform = check->add_subcommand("transform", "Legendre Q and Selberg transform");
    auto* spectrum = app.add_subcommand("length-spectrum", "primitive length spectrum");
    auto* surface = app.add_subcommand("trace-surface", "geometric side on a compact surface");
    auto* weyl = app.add_subcommand("weyl", "heat trace and Weyl slope");
    auto* count = app.add_subcommand("geodesic-count", "smoothed prime geodesic count");
    auto* zeta_cmd = app.add_subcommand("zeta", "Selberg zeta Euler product");
    auto* poles = app.add_subcommand("scattering-poles", "cylinder scattering poles");
    for (auto* s : {poisson, cot, sphere, cylinder, transform, spectrum, surface, weyl, count, zeta_cmd, poles})
        s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Runner run(c);
        const auto f = run.fmt();
        std::string text;
        if (*poisson)
            run.poisson();
        else if (*cot)
            run.cot();
        else if (*sphere)
            run.sphere();
        else if (*cylinder)
            run.cylinder();
        else if (*transform)
            run.transform();
        else if (*spectrum)
            run.length_spectrum_cmd(text);
        else if (*surface)
            run.trace_surface();
        else if (*weyl)
            run.weyl();
        else if (*count)
            run.geodesic_count();
        else if (*zeta_cmd)
            run.zeta_cmd();
        else if (*poles)
            run.poles();
        if (text.empty()) text = report::render(run.rows, f);
        write(text, c.out);
        if (!run.pass) {
            std::cerr << "selberg: a check exceeded its tolerance\n";
            return 1;
        }
        return 0;
    } catch (const input_error& e) {
        std::cerr << "selberg: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "selberg: " << e.what() << "\n";
        return 2;
    } catch (const group::enumeration_budget_error& e) {
        std::cerr << "selberg: " << e.what() << "\n";
        return 1;
    } catch (const convergence_error& e) {
        std::cerr << "selberg: " << e.what() << "\n";
        return 1;
    }
}
