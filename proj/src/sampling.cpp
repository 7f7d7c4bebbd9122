#include "slspec/sampling.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace slspec {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNodeSnap = 1e-9;   // |sigma (mu - mu_j)| below this hits the node
constexpr double kGuardEps = 1e-12;  // |reg| below this is inside the guard zone

} // namespace

SamplingConfig SamplingConfig::resolved() const {
    SamplingConfig c = *this;
    if (c.theta == 0.0 && c.N > c.m)
        c.theta = 1.0 / static_cast<double>(c.N - c.m);
    return c;
}

void SamplingConfig::validate() const {
    if (m < 2)
        throw std::invalid_argument("sampling: m must be >= 2");
    if (N <= m)
        throw std::invalid_argument("sampling: N must exceed m");
    if (!(theta > 0.0))
        throw std::invalid_argument("sampling: theta must be positive");
    if (!(b > 0.0))
        throw std::invalid_argument("sampling: interval length b must be positive");
}

double SamplingConfig::node(std::size_t j) const {
    return static_cast<double>(j) * kPi / sigma();
}

std::size_t SampleTable::idx(int k, int l) {
    if (k < 1 || k > 2 || l < 1 || l > 2)
        throw std::invalid_argument("sample table index out of range");
    return static_cast<std::size_t>((k - 1) * 2 + (l - 1));
}

cplx sinc_reg(double theta, std::size_t m, cplx mu) {
    cplx t = theta * mu;
    cplx base;
    if (std::abs(t) < 1e-4) {
        cplx t2 = t * t;
        base = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    } else {
        base = std::sin(t) / t;
    }
    return std::pow(base, static_cast<double>(m));
}

cplx cardinal_sinc(cplx z) {
    if (std::abs(z) < 1e-8) {
        cplx z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

SampleTable build_sample_table(const Problem& p, const SamplingConfig& raw_cfg,
                               unsigned threads) {
    SamplingConfig cfg = raw_cfg.resolved();
    cfg.b = p.b;
    cfg.validate();

    const std::size_t count = cfg.N + 1;
    SampleTable t;
    t.config = cfg;
    t.problem_name = p.name;
    t.nodes.resize(count);
    for (auto& series : t.h)
        series.resize(count);
    t.ivp_steps.resize(count);

    auto start = std::chrono::steady_clock::now();

    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::size_t first_error_j = count;

    auto worker = [&] {
        for (;;) {
            std::size_t j = next.fetch_add(1);
            if (j >= count)
                return;
            try {
                double mu_j = cfg.node(j);
                BaseSolution base = solve_base_pair(p.q, cfg.b, cplx(mu_j, 0.0), cfg.ivp);

                cplx reg = sinc_reg(cfg.theta, cfg.m, cplx(mu_j, 0.0));
                double cos_b = std::cos(cfg.b * mu_j);
                double sin_b = std::sin(cfg.b * mu_j);
                double sinc_b = j == 0 ? cfg.b : sin_b / mu_j;

                t.nodes[j] = mu_j;
                t.h[0][j] = reg * (base.yc_end - cos_b);
                t.h[1][j] = reg * (base.ys_end - sinc_b);
                t.h[2][j] = reg * (base.yc_prime_end + mu_j * sin_b);
                t.h[3][j] = reg * (base.ys_prime_end - cos_b);
                t.ivp_steps[j] = base.steps_taken;
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (j < first_error_j) {
                    first_error_j = j;
                    first_error = std::current_exception();
                }
                next.store(count); // stop handing out work
                return;
            }
        }
    };

    unsigned n_threads = threads != 0 ? threads : std::thread::hardware_concurrency();
    n_threads = std::max(1u, std::min<unsigned>(n_threads, count));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    if (first_error) {
        try {
            std::rethrow_exception(first_error);
        } catch (const Error& e) {
            throw IvpError("sample table node j = " + std::to_string(first_error_j) +
                           " (mu = " + std::to_string(cfg.node(first_error_j)) +
                           "): " + e.what());
        }
    }

    t.build_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return t;
}

cplx eval_h(const SampleTable& t, int k, int l, cplx mu) {
    const auto& samples = t.samples(k, l);
    const double sigma = t.config.sigma();
    const std::size_t count = samples.size();

    // Interpolation short circuit: at (or within 1e-9/sigma of) a node
    // +-mu_j the stored sample is returned bit-for-bit.
    for (std::size_t j = 0; j < count; ++j) {
        if (std::abs(sigma * (mu - t.nodes[j])) < kNodeSnap ||
            (j > 0 && std::abs(sigma * (mu + t.nodes[j])) < kNodeSnap))
            return samples[j];
    }

    cplx sum = samples[0] * cardinal_sinc(sigma * mu);
    for (std::size_t j = 1; j < count; ++j) {
        cplx kernel = cardinal_sinc(sigma * (mu - t.nodes[j])) +
                      cardinal_sinc(sigma * (mu + t.nodes[j]));
        sum += samples[j] * kernel;
    }
    return sum;
}

EndpointQuad reconstruct_endpoint(const SampleTable& t, cplx mu) {
    const SamplingConfig& cfg = t.config;
    cplx reg = sinc_reg(cfg.theta, cfg.m, mu);
    if (std::abs(reg) < kGuardEps) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "mu = %g%+gi lies in the guard zone of a multiple of pi/theta "
                      "= %g; the inversion is singular there",
                      mu.real(), mu.imag(), kPi / cfg.theta);
        throw GuardZoneError(buf);
    }

    cplx cos_b = std::cos(cfg.b * mu);
    cplx sin_b = std::sin(cfg.b * mu);
    cplx sinc_b = cfg.b * cardinal_sinc(cfg.b * mu); // sin(b mu)/mu with mu -> 0 limit

    EndpointQuad v;
    v.yc = eval_h(t, 1, 1, mu) / reg + cos_b;
    v.ys = eval_h(t, 1, 2, mu) / reg + sinc_b;
    v.yc_prime = eval_h(t, 2, 1, mu) / reg - mu * sin_b;
    v.ys_prime = eval_h(t, 2, 2, mu) / reg + cos_b;
    return v;
}

cplx char_det(const Problem& p, cplx mu, const EndpointQuad& v) {
    cplx a[2][4];
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 4; ++c)
            a[r][c] = p.boundary_entry(r, c, mu);

    // Columns of A (w1 | w2) with w1 = (1,0,yc,yc')^T, w2 = (0,1,ys,ys')^T.
    cplx m11 = a[0][0] + a[0][2] * v.yc + a[0][3] * v.yc_prime;
    cplx m21 = a[1][0] + a[1][2] * v.yc + a[1][3] * v.yc_prime;
    cplx m12 = a[0][1] + a[0][2] * v.ys + a[0][3] * v.ys_prime;
    cplx m22 = a[1][1] + a[1][2] * v.ys + a[1][3] * v.ys_prime;
    return m11 * m22 - m21 * m12;
}

cplx char_function(const Problem& p, const SampleTable& t, cplx mu) {
    return char_det(p, mu, reconstruct_endpoint(t, mu));
}

cplx char_function_direct(const Problem& p, cplx mu, const IvpConfig& cfg) {
    BaseSolution base = solve_base_pair(p.q, p.b, mu, cfg);
    EndpointQuad v{base.yc_end, base.ys_end, base.yc_prime_end, base.ys_prime_end};
    return char_det(p, mu, v);
}

// ---------------------------------------------------------------------------
// Serialization. The writer is hand-rolled so that rebuilding an identical
// table yields a byte-identical file: fixed key order, %.17g decimals, no
// wall-clock metadata.

namespace {

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void append_complex_pair(std::string& out, cplx v) {
    out += '[';
    append_double(out, v.real());
    out += ',';
    append_double(out, v.imag());
    out += ']';
}

std::string escape_json(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
        } else {
            out += c;
        }
    }
    return out;
}

} // namespace

std::string table_to_json(const SampleTable& t) {
    const SamplingConfig& c = t.config;
    std::string out;
    out.reserve(1 << 16);
    out += "{\n  \"format\": \"slspec-sample-table\",\n  \"version\": 1,\n";
    out += "  \"problem\": \"" + escape_json(t.problem_name) + "\",\n";
    out += "  \"config\": {\"N\": " + std::to_string(c.N) +
           ", \"m\": " + std::to_string(c.m) + ", \"theta\": ";
    append_double(out, c.theta);
    out += ", \"b\": ";
    append_double(out, c.b);
    out += ", \"sigma\": ";
    append_double(out, c.sigma());
    out += ",\n    \"ivp\": {\"abs_tol\": ";
    append_double(out, c.ivp.abs_tol);
    out += ", \"rel_tol\": ";
    append_double(out, c.ivp.rel_tol);
    out += ", \"initial_step\": ";
    append_double(out, c.ivp.initial_step);
    out += ", \"min_step\": ";
    append_double(out, c.ivp.min_step);
    out += ", \"max_steps\": " + std::to_string(c.ivp.max_steps) + "}},\n";

    out += "  \"nodes\": [";
    for (std::size_t j = 0; j < t.nodes.size(); ++j) {
        if (j)
            out += ',';
        append_double(out, t.nodes[j]);
    }
    out += "],\n  \"h\": {";
    static constexpr const char* kNames[4] = {"h11", "h12", "h21", "h22"};
    for (int s = 0; s < 4; ++s) {
        if (s)
            out += ", ";
        out += '"';
        out += kNames[s];
        out += "\": [";
        for (std::size_t j = 0; j < t.h[s].size(); ++j) {
            if (j)
                out += ',';
            append_complex_pair(out, t.h[s][j]);
        }
        out += ']';
    }
    out += "},\n  \"ivp_steps\": [";
    for (std::size_t j = 0; j < t.ivp_steps.size(); ++j) {
        if (j)
            out += ',';
        out += std::to_string(t.ivp_steps[j]);
    }
    out += "]\n}\n";
    return out;
}

SampleTable table_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.value("format", "") != "slspec-sample-table")
        throw Error("not a slspec sample-table document");

    SampleTable t;
    const auto& jc = doc.at("config");
    t.config.N = jc.at("N").get<std::size_t>();
    t.config.m = jc.at("m").get<std::size_t>();
    t.config.theta = jc.at("theta").get<double>();
    t.config.b = jc.at("b").get<double>();
    const auto& ji = jc.at("ivp");
    t.config.ivp.abs_tol = ji.at("abs_tol").get<double>();
    t.config.ivp.rel_tol = ji.at("rel_tol").get<double>();
    t.config.ivp.initial_step = ji.at("initial_step").get<double>();
    t.config.ivp.min_step = ji.at("min_step").get<double>();
    t.config.ivp.max_steps = ji.at("max_steps").get<std::size_t>();
    t.config.validate();
    if (jc.contains("sigma") && jc.at("sigma").get<double>() != t.config.sigma())
        throw Error("sample table: stored sigma disagrees with b + m*theta");

    t.problem_name = doc.value("problem", "");
    t.nodes = doc.at("nodes").get<std::vector<double>>();
    if (t.nodes.size() != t.config.N + 1)
        throw Error("sample table: node count does not match N + 1");

    static constexpr const char* kNames[4] = {"h11", "h12", "h21", "h22"};
    for (int s = 0; s < 4; ++s) {
        const auto& arr = doc.at("h").at(kNames[s]);
        if (arr.size() != t.nodes.size())
            throw Error("sample table: sample count does not match node count");
        t.h[s].reserve(arr.size());
        for (const auto& pair : arr)
            t.h[s].emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
    if (doc.contains("ivp_steps"))
        t.ivp_steps = doc.at("ivp_steps").get<std::vector<std::size_t>>();
    return t;
}

} // namespace slspec
