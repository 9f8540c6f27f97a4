#pragma once

#include "drs/iteration.hpp"
#include "drs/rng.hpp"
#include "drs/subspace.hpp"
#include "drs/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace drs {

struct DimRange {
    int lo;
    int hi;
};

/// Benchmark configuration. Defaults match the reference experiment: pairs
/// of random subspaces of R⁵⁰ with nontrivial intersection, ten unit-norm-10
/// starts each, tolerance 1e-3, both stopping criteria.
struct ExperimentConfig {
    int ambient_dim = 50;
    int num_pairs = 100;
    int starts_per_pair = 10;
    double start_norm = 10.0;
    double epsilon = 1e-3;
    std::uint64_t seed = 0;
    long cap = 1000000;
    DimRange intersection_dim{1, 5};
    DimRange subspace_dim{5, 25};
    int workers = 0; // 0 → hardware_concurrency

    void validate() const {
        detail::require(ambient_dim >= 2, "ExperimentConfig: ambient_dim must be at least 2");
        detail::require(num_pairs >= 1, "ExperimentConfig: num_pairs must be positive");
        detail::require(starts_per_pair >= 1, "ExperimentConfig: starts_per_pair must be positive");
        detail::require(start_norm > 0.0, "ExperimentConfig: start_norm must be positive");
        detail::require(epsilon > 0.0, "ExperimentConfig: epsilon must be positive");
        detail::require(cap >= 1, "ExperimentConfig: cap must be at least 1");
        detail::require(intersection_dim.lo >= 1 && intersection_dim.lo <= intersection_dim.hi,
                        "ExperimentConfig: bad intersection dimension range");
        detail::require(subspace_dim.lo >= 1 && subspace_dim.lo <= subspace_dim.hi,
                        "ExperimentConfig: bad subspace dimension range");
        // At least one (w, dimU, dimV) triple must satisfy the invariant
        // w <= min(dimU, dimV) and dimU + dimV - w <= ambient_dim.
        const int w = intersection_dim.lo;
        const int s = std::max(subspace_dim.lo, w);
        detail::require(w <= subspace_dim.hi && 2 * s - w <= ambient_dim,
                        "ExperimentConfig: impossible dimension combination");
    }
};

enum class Criterion { TrueError, MaxDistance };

inline const char* to_string(Criterion c) {
    return c == Criterion::TrueError ? "TrueError" : "MaxDistance";
}

/// One benchmark outcome: a (pair, start, method, criterion) cell.
struct BenchRecord {
    int pair_id = 0;
    int start_id = 0;
    Method method = Method::DR;
    Criterion criterion = Criterion::TrueError;
    double friedrichs_angle = 0.0; // radians, arccos of the Friedrichs cosine
    long iterations = 0;           // first n at which the criterion fires
    double final_true_error = 0.0; // distance of the monitored point to U∩V at that n
    bool capped = false;

    friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

namespace detail {

// Append `extra` Gram-Schmidt-fresh Gaussian columns to an orthonormal set.
inline Matrix extend_orthonormal(const Matrix& existing, int extra, Xoshiro256pp& rng) {
    const int d = static_cast<int>(existing.rows());
    Matrix out(d, existing.cols() + extra);
    out.leftCols(existing.cols()) = existing;
    int filled = static_cast<int>(existing.cols());
    while (filled < out.cols()) {
        Vector g(d);
        for (int i = 0; i < d; ++i) g(i) = rng.normal();
        // Two projection passes keep the new column orthogonal to working precision.
        for (int pass = 0; pass < 2; ++pass)
            g -= out.leftCols(filled) * (out.leftCols(filled).transpose() * g);
        const double norm = g.norm();
        if (norm < 1e-6) continue; // essentially dependent draw; try again
        out.col(filled) = g / norm;
        ++filled;
    }
    return out;
}

} // namespace detail

// Smallest closest-approach angle the pair generator will draw. Keeps the
// slowest instances (alternating projections at rate cos²φ) well under the
// default iteration cap.
inline constexpr double kMinPairAngle = 5e-3;

/// A random pair (U, V) sharing an intersection of the drawn dimension.
/// A common Gaussian subspace W is drawn first and both U and V extend it
/// with Gaussian columns; V's first fresh direction is tilted toward a
/// random direction of U by a closest-approach angle drawn uniformly from
/// [kMinPairAngle, π/2]. The tilt spreads the Friedrichs angle over the
/// whole range — independent Gaussian extensions almost never produce small
/// angles, and when they do the whole principal spectrum is squeezed, which
/// buries the shadow-sequence rippling the small-angle regime is about.
/// The intersection dimension is verified via the principal-angle spectrum
/// and the pair redrawn on the measure-zero failure.
inline std::pair<Subspace, Subspace> random_subspace_pair(const ExperimentConfig& config,
                                                          Xoshiro256pp& rng) {
    config.validate();
    const int d = config.ambient_dim;
    const double half_pi = 1.5707963267948966;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const int w = static_cast<int>(rng.int_in(config.intersection_dim.lo, config.intersection_dim.hi));
        const int ku = static_cast<int>(rng.int_in(config.subspace_dim.lo, config.subspace_dim.hi));
        const int kv = static_cast<int>(rng.int_in(config.subspace_dim.lo, config.subspace_dim.hi));
        if (w > std::min(ku, kv) || ku + kv - w > d) continue;

        const Matrix shared = detail::extend_orthonormal(Matrix(d, 0), w, rng);
        const Matrix bu = detail::extend_orthonormal(shared, ku - w, rng);
        Subspace u(d, bu);

        Matrix v_seed = shared;
        if (ku > w && kv > w) {
            // random unit direction of U beyond the intersection
            Vector coeffs(ku - w);
            for (int i = 0; i < ku - w; ++i) coeffs(i) = rng.normal();
            Vector u_dir = bu.rightCols(ku - w) * coeffs;
            u_dir.normalize();

            // Gaussian direction orthogonal to all of U
            Vector g(d);
            double g_norm = 0.0;
            do {
                for (int i = 0; i < d; ++i) g(i) = rng.normal();
                g -= bu * (bu.transpose() * g);
                g_norm = g.norm();
            } while (g_norm < 1e-6);
            g /= g_norm;

            const double phi = kMinPairAngle + (half_pi - kMinPairAngle) * rng.uniform01();
            Matrix tilted(d, w + 1);
            tilted << shared, Vector(std::cos(phi) * u_dir + std::sin(phi) * g);
            v_seed = std::move(tilted);
        }
        const Matrix bv = detail::extend_orthonormal(v_seed, kv - static_cast<int>(v_seed.cols()), rng);
        Subspace v(d, bv);
        if (principal_angles(u, v).intersection_dim != w) continue;
        return {std::move(u), std::move(v)};
    }
    throw std::runtime_error("random_subspace_pair: could not draw a valid pair");
}

/// Gaussian direction scaled to the exact requested norm.
inline Vector random_start(int dim, double norm, Xoshiro256pp& rng) {
    detail::require(dim >= 1, "random_start: dimension must be positive");
    detail::require(norm > 0.0, "random_start: norm must be positive");
    for (;;) {
        Vector g(dim);
        for (int i = 0; i < dim; ++i) g(i) = rng.normal();
        const double len = g.norm();
        if (len > 1e-12) return g * (norm / len);
    }
}

namespace detail {

struct CriterionOutcome {
    long iterations = -1;
    double final_true_error = 0.0;
    bool capped = false;
};

// One trajectory serves both criteria: the iterates do not depend on the
// stopping rule, so each criterion's first firing index is read off the
// same orbit.
inline std::pair<CriterionOutcome, CriterionOutcome> run_instance(
    Method method, const Subspace& u, const Subspace& v, const Subspace& u_cap_v,
    const Vector& x0, double epsilon, long cap) {
    CriterionOutcome true_err, max_dist;
    Vector x = x0;
    for (long n = 0;; ++n) {
        Vector pu = project(u, x);
        const Vector& z = method == Method::DR ? pu : x;
        const double te = distance_to(u_cap_v, z);
        const double du = distance_to(u, z);
        const double dv = distance_to(v, z);

        if (true_err.iterations < 0 && te < epsilon) {
            true_err.iterations = n;
            true_err.final_true_error = te;
        }
        if (max_dist.iterations < 0 && std::max(du, dv) < epsilon) {
            max_dist.iterations = n;
            max_dist.final_true_error = te;
        }
        if (true_err.iterations >= 0 && max_dist.iterations >= 0) break;
        if (n == cap) {
            if (true_err.iterations < 0) true_err = {cap, te, true};
            if (max_dist.iterations < 0) max_dist = {cap, te, true};
            break;
        }
        x = method == Method::DR ? Vector(project(v, 2.0 * pu - x) + x - pu)
                                 : Vector(project(v, pu));
    }
    return {true_err, max_dist};
}

inline void bench_one_pair(const ExperimentConfig& config, int pair_id,
                           std::vector<BenchRecord>& out) {
    Xoshiro256pp rng(derive_stream_seed(config.seed, static_cast<std::uint64_t>(pair_id)));
    const auto [u, v] = random_subspace_pair(config, rng);
    const Subspace u_cap_v = intersect(u, v);
    const double c = principal_angles(u, v).friedrichs_cos;
    const double angle = std::acos(std::clamp(c, 0.0, 1.0));

    for (int start_id = 0; start_id < config.starts_per_pair; ++start_id) {
        const Vector x0 = random_start(config.ambient_dim, config.start_norm, rng);
        for (Method method : {Method::DR, Method::MAP}) {
            const auto [te, md] =
                run_instance(method, u, v, u_cap_v, x0, config.epsilon, config.cap);
            out.push_back({pair_id, start_id, method, Criterion::TrueError, angle, te.iterations,
                           te.final_true_error, te.capped});
            out.push_back({pair_id, start_id, method, Criterion::MaxDistance, angle, md.iterations,
                           md.final_true_error, md.capped});
        }
    }
}

} // namespace detail

/// Run the full benchmark: 4 records per (pair, start) — both methods under
/// both criteria. Pairs are independent seeded streams, so the output is
/// byte-identical regardless of the worker count.
inline std::vector<BenchRecord> run_benchmark(const ExperimentConfig& config) {
    config.validate();
    const int workers_wanted = config.workers > 0
                                   ? config.workers
                                   : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const int workers = std::min(workers_wanted, config.num_pairs);

    std::vector<std::vector<BenchRecord>> per_pair(static_cast<std::size_t>(config.num_pairs));
    auto work = [&config, &per_pair, workers](int first) {
        for (int pair = first; pair < config.num_pairs; pair += workers)
            detail::bench_one_pair(config, pair, per_pair[static_cast<std::size_t>(pair)]);
    };

    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }

    std::vector<BenchRecord> records;
    records.reserve(static_cast<std::size_t>(config.num_pairs) *
                    static_cast<std::size_t>(config.starts_per_pair) * 4);
    for (auto& chunk : per_pair)
        records.insert(records.end(), chunk.begin(), chunk.end());
    return records;
}

/// Per-bin median iteration counts. Bins partition (0, π/2] into `bins`
/// equal widths; empty bins are omitted.
struct MedianPoint {
    Method method;
    Criterion criterion;
    int bin = 0;
    double angle_center = 0.0;
    int count = 0;
    double median_iterations = 0.0;
};

inline std::vector<MedianPoint> aggregate_median(const std::vector<BenchRecord>& records, int bins) {
    detail::require(!records.empty(), "aggregate_median: no records");
    detail::require(bins >= 1, "aggregate_median: bins must be positive");
    const double half_pi = 1.5707963267948966;
    const double width = half_pi / bins;

    std::map<std::tuple<int, int, int>, std::vector<long>> buckets;
    for (const auto& r : records) {
        int bin = static_cast<int>(std::floor(r.friedrichs_angle / width));
        bin = std::clamp(bin, 0, bins - 1);
        buckets[{static_cast<int>(r.method), static_cast<int>(r.criterion), bin}]
            .push_back(r.iterations);
    }

    std::vector<MedianPoint> out;
    out.reserve(buckets.size());
    for (auto& [key, values] : buckets) {
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        const double median = n % 2 == 1
                                  ? static_cast<double>(values[n / 2])
                                  : 0.5 * (static_cast<double>(values[n / 2 - 1]) +
                                           static_cast<double>(values[n / 2]));
        MedianPoint p;
        p.method = static_cast<Method>(std::get<0>(key));
        p.criterion = static_cast<Criterion>(std::get<1>(key));
        p.bin = std::get<2>(key);
        p.angle_center = (std::get<2>(key) + 0.5) * width;
        p.count = static_cast<int>(n);
        p.median_iterations = median;
        out.push_back(p);
    }
    return out;
}

inline constexpr const char* kBenchCsvHeader =
    "pair_id,start_id,method,criterion,friedrichs_angle,iterations,final_true_error,capped";

inline void emit_csv(const std::vector<BenchRecord>& records, std::ostream& os) {
    os << kBenchCsvHeader << '\n';
    for (const auto& r : records) {
        os << format_int(r.pair_id) << ',' << format_int(r.start_id) << ',' << to_string(r.method)
           << ',' << to_string(r.criterion) << ',' << format_double(r.friedrichs_angle) << ','
           << format_int(r.iterations) << ',' << format_double(r.final_true_error) << ','
           << (r.capped ? "true" : "false") << '\n';
    }
}

inline void emit_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit_csv: cannot open '" + path.string() + "' for writing");
    emit_csv(records, os);
    if (!os.good()) throw std::runtime_error("emit_csv: write failed for '" + path.string() + "'");
}

inline std::vector<BenchRecord> parse_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kBenchCsvHeader)
        throw std::invalid_argument("parse_csv: missing or unexpected header");

    std::vector<BenchRecord> records;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 8) throw std::invalid_argument("parse_csv: bad row '" + line + "'");

        BenchRecord r;
        r.pair_id = static_cast<int>(parse_int(fields[0]));
        r.start_id = static_cast<int>(parse_int(fields[1]));
        if (fields[2] == "DR") r.method = Method::DR;
        else if (fields[2] == "MAP") r.method = Method::MAP;
        else throw std::invalid_argument("parse_csv: bad method '" + fields[2] + "'");
        if (fields[3] == "TrueError") r.criterion = Criterion::TrueError;
        else if (fields[3] == "MaxDistance") r.criterion = Criterion::MaxDistance;
        else throw std::invalid_argument("parse_csv: bad criterion '" + fields[3] + "'");
        r.friedrichs_angle = parse_double(fields[4]);
        r.iterations = parse_int(fields[5]);
        r.final_true_error = parse_double(fields[6]);
        if (fields[7] == "true") r.capped = true;
        else if (fields[7] == "false") r.capped = false;
        else throw std::invalid_argument("parse_csv: bad capped flag '" + fields[7] + "'");
        records.push_back(r);
    }
    return records;
}

/// Scatter plot data: one row per record, "# series angle iterations".
inline void write_scatter_data(const std::vector<BenchRecord>& records, std::ostream& os) {
    os << "# series angle iterations\n";
    for (const auto& r : records)
        os << to_string(r.method) << '_' << to_string(r.criterion) << ' '
           << format_double(r.friedrichs_angle) << ' ' << format_int(r.iterations) << '\n';
}

/// Median plot data: "# series angle median count".
inline void write_median_data(const std::vector<MedianPoint>& medians, std::ostream& os) {
    os << "# series angle median count\n";
    for (const auto& m : medians)
        os << to_string(m.method) << '_' << to_string(m.criterion) << ' '
           << format_double(m.angle_center) << ' ' << format_double(m.median_iterations) << ' '
           << format_int(m.count) << '\n';
}

} // namespace drs
