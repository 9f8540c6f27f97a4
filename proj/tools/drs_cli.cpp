// Command-line front end: residual tables, rate reports, iteration traces,
// the plane closed forms, the block-construction growth tables, and the
// DR-vs-MAP benchmark. Every figure-producing subcommand writes its raw
// columnar data; SVG renderings are added with --format svg.

#include "drs/drs.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "RNG seed (same seed => byte-identical outputs)");
    cmd->add_option("--out", flags.out_dir, "output directory, created if absent");
    cmd->add_option("--format", flags.format, "csv (data only) or svg (data plus renderings)")
        ->check(CLI::IsMember({"csv", "svg"}));
}

fs::path prepare_out_dir(const CommonFlags& flags) {
    fs::path dir(flags.out_dir);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return os;
}

void write_file(const fs::path& path, const std::string& content) {
    auto os = open_out(path);
    os << content;
    if (!os.good()) throw std::runtime_error("write failed for '" + path.string() + "'");
}

// Seeded random pair with the default benchmark dimension ranges, clamped
// so small --dim values still work.
std::pair<drs::Subspace, drs::Subspace> seeded_pair(int dim, std::uint64_t seed) {
    drs::ExperimentConfig cfg;
    cfg.ambient_dim = dim;
    cfg.subspace_dim = {std::min(5, std::max(1, dim / 4)), std::max(1, std::min(25, dim / 2))};
    cfg.intersection_dim = {1, std::min(5, cfg.subspace_dim.lo)};
    drs::Xoshiro256pp rng(seed);
    return drs::random_subspace_pair(cfg, rng);
}

struct PairSelection {
    int dim = 50;
    int theta_num = 0;
    int theta_den = 0;

    bool plane() const { return theta_den != 0; }
    double theta() const { return drs::kPi * theta_num / theta_den; }

    std::pair<drs::Subspace, drs::Subspace> make(std::uint64_t seed) const {
        if (plane()) return {drs::horizontal_line(), drs::line_at(theta())};
        return seeded_pair(dim, seed);
    }
};

void add_pair_selection(CLI::App* cmd, PairSelection& sel) {
    cmd->add_option("--dim", sel.dim, "ambient dimension for a seeded random pair")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--theta-num", sel.theta_num, "use the plane pair at angle (num/den)*pi");
    cmd->add_option("--theta-den", sel.theta_den, "denominator of the rational angle")
        ->check(CLI::PositiveNumber);
}

// ---------------------------------------------------------------- identities

int run_identities(const CommonFlags& flags, const PairSelection& sel, int n_max) {
    const auto [u, v] = sel.make(flags.seed);
    const auto report = drs::verify_identities(u, v, n_max);
    std::size_t width = 0;
    for (const auto& c : report) width = std::max(width, c.name.size());
    for (const auto& c : report)
        std::cout << c.name << std::string(width - c.name.size() + 2, ' ')
                  << drs::format_double(c.residual) << '\n';
    std::cout << "max_residual=" << drs::format_double(drs::max_residual(report)) << '\n';
    return 0;
}

// --------------------------------------------------------------------- rates

int run_rates(const CommonFlags& flags, const PairSelection& sel, int n_max) {
    const auto [u, v] = sel.make(flags.seed);
    const auto report = drs::rate_report(u, v, n_max);

    const fs::path dir = prepare_out_dir(flags);
    auto os = open_out(dir / "rates.csv");
    os << "n,quantity,measured,predicted\n";
    for (const auto& row : report.rows)
        os << drs::format_int(row.n) << ',' << drs::to_string(row.quantity) << ','
           << drs::format_double(row.measured) << ',' << drs::format_double(row.predicted) << '\n';

    if (flags.format == "svg") {
        std::vector<drs::SvgSeries> series;
        const char* colors[] = {"red", "darkorange", "gold", "green", "blue", "purple"};
        for (int q = 0; q < 6; ++q) {
            drs::SvgSeries s;
            s.label = drs::to_string(static_cast<drs::RateQuantity>(q));
            s.color = colors[q];
            for (const auto& row : report.rows)
                if (static_cast<int>(row.quantity) == q)
                    s.points.emplace_back(row.n, row.measured);
            series.push_back(std::move(s));
        }
        drs::SvgOptions opt;
        opt.log_y = true;
        opt.title = "operator-norm decay, friedrichs cosine " +
                    drs::format_double(report.friedrichs_cos, 6);
        opt.x_label = "n";
        opt.y_label = "norm";
        write_file(dir / "rates.svg", drs::render_svg(series, opt));
    }

    std::cout << "friedrichs_cos=" << drs::format_double(report.friedrichs_cos) << '\n';
    std::cout << "max_relative_error=" << drs::format_double(report.max_relative_error) << '\n';
    return 0;
}

// ------------------------------------------------------------------- iterate

int run_iterate(const CommonFlags& flags, const PairSelection& sel, const std::string& method,
                const std::string& rule_name, double eps, long count, long cap, double norm) {
    const auto [u, v] = sel.make(flags.seed);

    drs::Vector x0;
    if (sel.plane()) {
        x0 = drs::Vector(2);
        x0 << norm, 0.0;
    } else {
        drs::Xoshiro256pp rng(drs::derive_stream_seed(flags.seed, 0x5741u));
        x0 = drs::random_start(u.ambient_dim(), norm, rng);
    }

    drs::StoppingRule rule = drs::StoppingRule::fixed_count(count);
    if (rule_name == "true-error") rule = drs::StoppingRule::true_error(eps);
    else if (rule_name == "max-distance") rule = drs::StoppingRule::max_distance(eps);

    const drs::IterationTrace trace = method == "dr"
                                          ? drs::run_dr(u, v, x0, rule, cap)
                                          : drs::run_map(u, v, x0, rule, cap);

    const fs::path dir = prepare_out_dir(flags);
    auto os = open_out(dir / "trace.csv");
    os << "n,true_error,dist_u,dist_v,err_iterate,err_shadow_u,err_shadow_v\n";
    for (const auto& s : trace.steps)
        os << drs::format_int(s.n) << ',' << drs::format_double(s.true_error) << ','
           << drs::format_double(s.dist_u) << ',' << drs::format_double(s.dist_v) << ','
           << drs::format_double(s.err_iterate) << ',' << drs::format_double(s.err_shadow_u) << ','
           << drs::format_double(s.err_shadow_v) << '\n';

    if (flags.format == "svg") {
        drs::SvgSeries errs{"true_error", "blue", false, {}};
        for (const auto& s : trace.steps)
            errs.points.emplace_back(static_cast<double>(s.n), s.true_error);
        drs::SvgOptions opt;
        opt.log_y = true;
        opt.title = std::string(drs::to_string(trace.method)) + " trace";
        opt.x_label = "n";
        opt.y_label = "distance to intersection";
        write_file(dir / "trace.svg", drs::render_svg({errs}, opt));
    }

    std::cout << "method=" << drs::to_string(trace.method) << '\n';
    std::cout << "terminated_by=" << trace.terminated_by << '\n';
    std::cout << "iterations=" << trace.iterations() << '\n';
    std::cout << "final_true_error=" << drs::format_double(trace.steps.back().true_error) << '\n';
    return 0;
}

// ----------------------------------------------------------------- two-lines

int run_two_lines(const CommonFlags& flags, int theta_num, int theta_den, long n_max,
                  bool surface, int t_steps) {
    const double theta = drs::kPi * theta_num / theta_den;
    const fs::path dir = prepare_out_dir(flags);

    {
        auto os = open_out(dir / "two_lines_curves.dat");
        drs::write_curves(os, theta, n_max);
    }

    if (flags.format == "svg") {
        const drs::PlaneConfig cfg(theta);
        drs::Vector e0(2);
        e0 << 1, 0;
        drs::SvgSeries dr{"distance of iterate", "red", false, {}};
        drs::SvgSeries shadow{"distance of shadow", "blue", false, {}};
        drs::SvgSeries map{"distance of alternating", "green", false, {}};
        for (long n = 1; n <= n_max; ++n) {
            const auto norms = drs::closed_form_norms(cfg, e0, n);
            dr.points.emplace_back(static_cast<double>(n), norms.dr_norm);
            shadow.points.emplace_back(static_cast<double>(n), norms.shadow_norm);
            map.points.emplace_back(static_cast<double>(n), norms.map_norm);
        }
        drs::SvgOptions opt;
        opt.title = "two lines at angle " + drs::format_double(theta, 6);
        opt.x_label = "n";
        opt.y_label = "distance to solution";
        write_file(dir / "two_lines_curves.svg", drs::render_svg({dr, shadow, map}, opt));
    }

    if (surface) {
        std::vector<double> t_grid;
        for (int i = 0; i <= t_steps; ++i) t_grid.push_back(static_cast<double>(i) / t_steps);
        std::vector<long> n_grid;
        for (long n = 1; n <= n_max; ++n) n_grid.push_back(n);

        const struct {
            drs::PlaneQuantity q;
            const char* name;
        } surfaces[] = {{drs::PlaneQuantity::DR, "dr"},
                        {drs::PlaneQuantity::MAP, "map"},
                        {drs::PlaneQuantity::SHADOW, "shadow"}};
        for (const auto& sdef : surfaces) {
            const auto grid = drs::figure_surface(t_grid, n_grid, sdef.q);
            auto os = open_out(dir / (std::string("two_lines_surface_") + sdef.name + ".dat"));
            drs::write_surface(os, grid);
            if (flags.format == "svg") {
                drs::SvgOptions opt;
                opt.title = std::string("surface ") + drs::to_string(sdef.q);
                opt.x_label = "t (theta = (pi/2) t^3)";
                opt.y_label = "n";
                write_file(dir / (std::string("two_lines_surface_") + sdef.name + ".svg"),
                           drs::render_heatmap(grid.values, t_grid.size(), n_grid.size(), opt));
            }
        }
    }
    std::cout << "theta=" << drs::format_double(theta) << '\n';
    return 0;
}

// ----------------------------------------------------------------- ell2-demo

int run_ell2(const CommonFlags& flags, int m, double gamma, long n_max) {
    const drs::BlockModel model = drs::BlockModel::canonical(m);
    const drs::Vector x0 = drs::canonical_start(m);
    const fs::path dir = prepare_out_dir(flags);

    const auto operator_table = drs::sublinearity_certificate(model, x0, gamma, n_max);
    {
        auto os = open_out(dir / "ell2_operator.dat");
        drs::write_growth_table(os, operator_table);
    }
    // the shadow table needs one block per tabulated index
    const long shadow_n_max = std::min<long>(n_max, m);
    const auto shadow_table = drs::shadow_sublinearity(model, gamma, shadow_n_max);
    {
        auto os = open_out(dir / "ell2_shadow.dat");
        drs::write_growth_table(os, shadow_table);
    }

    if (flags.format == "svg") {
        auto to_series = [](const drs::GrowthTable& table, const char* label, const char* color) {
            drs::SvgSeries s{label, color, false, {}};
            for (const auto& r : table.rows)
                if (std::isfinite(r.measured))
                    s.points.emplace_back(static_cast<double>(r.n), r.measured);
            return s;
        };
        drs::SvgOptions opt;
        opt.log_y = true;
        opt.title = "scaled growth, gamma " + drs::format_double(gamma, 6);
        opt.x_label = "n";
        opt.y_label = "gamma^-n * norm";
        write_file(dir / "ell2_growth.svg",
                   drs::render_svg({to_series(operator_table, "operator orbit", "red"),
                                    to_series(shadow_table, "shadow orbit", "blue")},
                                   opt));
    }

    std::cout << "operator_witness_block=" << operator_table.witness_index << '\n';
    std::cout << "shadow_witness_block=" << shadow_table.witness_index << '\n';
    std::cout << "shadow_delta=" << drs::format_double(shadow_table.delta) << '\n';
    return 0;
}

// --------------------------------------------------------------------- bench

int run_bench(const CommonFlags& flags, drs::ExperimentConfig cfg, int bins) {
    cfg.seed = flags.seed;
    const auto records = drs::run_benchmark(cfg);
    const auto medians = drs::aggregate_median(records, bins);

    const fs::path dir = prepare_out_dir(flags);
    drs::emit_csv(records, dir / "bench_records.csv");
    {
        auto os = open_out(dir / "bench_scatter.dat");
        drs::write_scatter_data(records, os);
    }
    {
        auto os = open_out(dir / "bench_median.dat");
        drs::write_median_data(medians, os);
    }

    if (flags.format == "svg") {
        const struct {
            drs::Criterion criterion;
            const char* stem;
        } figures[] = {{drs::Criterion::TrueError, "true_error"},
                       {drs::Criterion::MaxDistance, "max_distance"}};
        for (const auto& fig : figures) {
            std::vector<drs::SvgSeries> scatter;
            std::vector<drs::SvgSeries> median_series;
            for (drs::Method method : {drs::Method::DR, drs::Method::MAP}) {
                drs::SvgSeries pts{std::string(drs::to_string(method)),
                                   method == drs::Method::DR ? "red" : "blue", true, {}};
                for (const auto& r : records)
                    if (r.criterion == fig.criterion && r.method == method)
                        pts.points.emplace_back(r.friedrichs_angle,
                                                static_cast<double>(r.iterations));
                scatter.push_back(std::move(pts));
                drs::SvgSeries med{std::string(drs::to_string(method)) + " median",
                                   method == drs::Method::DR ? "red" : "blue", false, {}};
                for (const auto& m : medians)
                    if (m.criterion == fig.criterion && m.method == method)
                        med.points.emplace_back(m.angle_center, m.median_iterations);
                median_series.push_back(std::move(med));
            }
            drs::SvgOptions opt;
            opt.log_y = true;
            opt.title = std::string("iterations vs angle, ") + drs::to_string(fig.criterion);
            opt.x_label = "friedrichs angle (rad)";
            opt.y_label = "iterations";
            write_file(dir / (std::string("bench_scatter_") + fig.stem + ".svg"),
                       drs::render_svg(scatter, opt));
            opt.title = std::string("median iterations vs angle, ") + drs::to_string(fig.criterion);
            write_file(dir / (std::string("bench_median_") + fig.stem + ".svg"),
                       drs::render_svg(median_series, opt));
        }
    }

    long capped = 0;
    for (const auto& r : records) capped += r.capped ? 1 : 0;
    std::cout << "records=" << records.size() << '\n';
    std::cout << "capped=" << capped << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Douglas-Rachford and alternating-projections toolkit for subspace pairs"};
    app.require_subcommand(1);

    CommonFlags flags;

    // identities
    auto* identities = app.add_subcommand("identities", "print the operator identity residual table");
    PairSelection id_sel;
    int id_n_max = 10;
    add_common(identities, flags);
    add_pair_selection(identities, id_sel);
    identities->add_option("--n-max", id_n_max, "largest power in the n-dependent identities")
        ->check(CLI::PositiveNumber);

    // rates
    auto* rates = app.add_subcommand("rates", "emit measured vs predicted decay rates as CSV");
    PairSelection rates_sel;
    int rates_n_max = 15;
    add_common(rates, flags);
    add_pair_selection(rates, rates_sel);
    rates->add_option("--n-max", rates_n_max, "largest power")->check(CLI::PositiveNumber);

    // iterate
    auto* iterate = app.add_subcommand("iterate", "run one driver and emit the trace as CSV");
    PairSelection it_sel;
    std::string it_method = "dr";
    std::string it_rule = "true-error";
    double it_eps = 1e-3;
    long it_count = 100;
    long it_cap = 1000000;
    double it_norm = 10.0;
    add_common(iterate, flags);
    add_pair_selection(iterate, it_sel);
    iterate->add_option("--method", it_method, "dr or map")->check(CLI::IsMember({"dr", "map"}));
    iterate->add_option("--rule", it_rule, "true-error, max-distance or fixed-count")
        ->check(CLI::IsMember({"true-error", "max-distance", "fixed-count"}));
    iterate->add_option("--eps", it_eps, "epsilon for the distance rules");
    iterate->add_option("--count", it_count, "step count for fixed-count");
    iterate->add_option("--cap", it_cap, "hard iteration ceiling");
    iterate->add_option("--start-norm", it_norm, "norm of the start point");

    // two-lines
    auto* two = app.add_subcommand("two-lines", "closed-form decay curves and surfaces");
    int tl_num = 1, tl_den = 17, tl_tsteps = 64;
    long tl_n = 100;
    bool tl_surface = false;
    add_common(two, flags);
    two->add_option("--theta-num", tl_num, "angle numerator: theta = (num/den)*pi");
    two->add_option("--theta-den", tl_den, "angle denominator")->check(CLI::PositiveNumber);
    two->add_option("--n", tl_n, "number of steps")->check(CLI::PositiveNumber);
    two->add_flag("--surface", tl_surface, "also emit the angle-sweep surfaces");
    two->add_option("--t-steps", tl_tsteps, "surface resolution in t")->check(CLI::PositiveNumber);

    // ell2-demo
    auto* ell2 = app.add_subcommand("ell2-demo", "growth tables for the block construction");
    int e_m = 2000;
    double e_gamma = 0.95;
    long e_n_max = 5000;
    add_common(ell2, flags);
    ell2->add_option("--m", e_m, "truncation length (number of blocks)")
        ->check(CLI::PositiveNumber);
    ell2->add_option("--gamma", e_gamma, "candidate linear rate in (0,1)");
    ell2->add_option("--n-max", e_n_max, "table length")->check(CLI::PositiveNumber);

    // bench
    auto* bench = app.add_subcommand("bench", "run the DR-vs-MAP benchmark");
    drs::ExperimentConfig bench_cfg;
    int bench_bins = 32;
    add_common(bench, flags);
    bench->add_option("--pairs", bench_cfg.num_pairs, "number of subspace pairs")
        ->check(CLI::PositiveNumber);
    bench->add_option("--starts", bench_cfg.starts_per_pair, "start points per pair")
        ->check(CLI::PositiveNumber);
    bench->add_option("--dim", bench_cfg.ambient_dim, "ambient dimension")
        ->check(CLI::PositiveNumber);
    bench->add_option("--eps", bench_cfg.epsilon, "stopping tolerance");
    bench->add_option("--cap", bench_cfg.cap, "hard iteration ceiling");
    bench->add_option("--norm", bench_cfg.start_norm, "start point norm");
    bench->add_option("--bins", bench_bins, "median angle bins")->check(CLI::PositiveNumber);
    bench->add_option("--workers", bench_cfg.workers, "worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // usage errors exit 2, --help exits 0
    }

    try {
        if (identities->parsed()) return run_identities(flags, id_sel, id_n_max);
        if (rates->parsed()) return run_rates(flags, rates_sel, rates_n_max);
        if (iterate->parsed())
            return run_iterate(flags, it_sel, it_method, it_rule, it_eps, it_count, it_cap, it_norm);
        if (two->parsed()) return run_two_lines(flags, tl_num, tl_den, tl_n, tl_surface, tl_tsteps);
        if (ell2->parsed()) return run_ell2(flags, e_m, e_gamma, e_n_max);
        if (bench->parsed()) return run_bench(flags, bench_cfg, bench_bins);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
