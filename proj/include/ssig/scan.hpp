#pragma once

// Scans of lambda_l over primes l = 1 (mod p), and their reports.

#include "io.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <thread>

namespace ssig::scan {

using io::json;

inline constexpr const char *version = "1.0.0";

// SI(r, l), read from or written to $SSIG_CACHE_DIR/sig_<r>_<l>.json when set.
inline sig::IsogenyDigraph load_or_build_sig(u64 r, unsigned ell, const sig::BuildOptions &opt)
{
    const char *dir = std::getenv("SSIG_CACHE_DIR");
    if (!dir || !*dir)
        return sig::build_sig(r, ell, opt);
    namespace fs = std::filesystem;
    const fs::path path = fs::path(dir) / ("sig_" + std::to_string(r) + "_" + std::to_string(ell) + ".json");
    std::error_code ec;
    if (fs::exists(path, ec)) {
        try {
            return io::sig_from_json(io::read_json_file(path.string()));
        }
        catch (const input_error &) {
            // stale or partial entry: rebuild below
        }
    }
    auto g = sig::build_sig(r, ell, opt);
    fs::create_directories(path.parent_path(), ec);
    const fs::path tmp = path.string() + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp);
        if (out)
            out << io::sig_to_json(g).dump() << "\n";
    }
    fs::rename(tmp, path, ec);
    return g;
}

struct ScanOptions {
    u64 r = 0, p = 0;
    unsigned ell_max = 0;
    unsigned verify_stride = 10;
    unsigned n_max = 2;
    unsigned jobs = 1;
    u64 seed = 0x5eed5eedULL;
    sig::BuildOptions build;
    iwasawa::Precision precision;
    std::optional<spectra::OrbitProfile> profile;
};

struct ScanRecord {
    u64 r = 0, p = 0;
    unsigned ell = 0;
    i64 lambda_ell = 0;
    unsigned lambda_delta = 0;
    unsigned mu = 0;
    bool routes_agree = true;
    std::optional<bool> in_admissible_set;
    bool verified = false;           // series route (and tower, when n_max >= 2) ran
    std::optional<i64> fit_lambda;   // tower route, when it stabilised
    double seconds = 0;
};

struct ScanFailure {
    unsigned ell = 0;
    std::string reason;
    bool internal = false; // invariant violation rather than a rejected input
};

struct ScanReport {
    ScanOptions options;
    std::vector<ScanRecord> records;
    std::vector<ScanFailure> failures;
    std::vector<unsigned> admissible;
    double seconds = 0;

    std::map<i64, u64> histogram() const
    {
        std::map<i64, u64> h;
        for (const auto &r : records)
            ++h[r.lambda_ell];
        return h;
    }

    std::vector<const ScanRecord *> violations() const
    {
        std::vector<const ScanRecord *> v;
        for (const auto &r : records)
            if (r.in_admissible_set == false)
                v.push_back(&r);
        return v;
    }
};

// Primes l <= ell_max with l = 1 (mod p) and l != r.
inline std::vector<unsigned> scan_primes(u64 r, u64 p, unsigned ell_max)
{
    std::vector<unsigned> out;
    for (u64 l : primes_up_to(ell_max))
        if (l % p == 1 && l != r)
            out.push_back(static_cast<unsigned>(l));
    return out;
}

inline ScanRecord scan_one(u64 r, unsigned ell, const ScanOptions &opt, bool verify, const std::vector<unsigned> *adm)
{
    const auto t0 = std::chrono::steady_clock::now();
    iwasawa::InvariantOptions io;
    io.build = opt.build;
    io.precision = opt.precision;
    io.charpoly_route = true;
    io.series_route = verify;
    io.n_max = verify ? opt.n_max : 0;
    const auto g = load_or_build_sig(r, ell, opt.build);
    const auto rep = iwasawa::invariants_from_sig(g, opt.p, io);
    ScanRecord rec;
    rec.r = r;
    rec.p = opt.p;
    rec.ell = ell;
    rec.lambda_ell = rep.lambda_ell;
    rec.lambda_delta = rep.lambda_delta;
    rec.mu = rep.mu;
    rec.routes_agree = rep.routes_agree;
    rec.verified = verify;
    if (rep.fit)
        rec.fit_lambda = rep.fit->lambda;
    if (adm)
        rec.in_admissible_set = std::binary_search(adm->begin(), adm->end(), static_cast<unsigned>(rec.lambda_ell));
    ensure(rec.lambda_ell >= 1 && rec.lambda_ell % 2 == 1, "lambda_l is not a positive odd integer");
    ensure(rec.lambda_delta == static_cast<unsigned>(rec.lambda_ell) + 1, "lambda_l != lambda(Delta) - 1");
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

inline ScanReport run_scan(const ScanOptions &opt)
{
    sig::require_scope(opt.r);
    require(opt.p != 2 && is_prime(opt.p), "p must be an odd prime");
    require(opt.p != opt.r, "p must differ from r");
    require(opt.verify_stride >= 1, "verify-stride must be at least 1");
    const auto t0 = std::chrono::steady_clock::now();
    ScanReport rep;
    rep.options = opt;
    if (opt.profile)
        rep.admissible = spectra::admissible_lambdas(opt.profile->sizes);
    const std::vector<unsigned> *adm = opt.profile ? &rep.admissible : nullptr;
    const auto ells = scan_primes(opt.r, opt.p, opt.ell_max);

    // Shared per-r state is built once before the workers start.
    sig::supersingular_vertices(opt.r);
    bool any_brandt = false;
    for (unsigned l : ells)
        any_brandt = any_brandt || sig::resolve_backend(opt.r, l, opt.build) == sig::Backend::brandt;
    if (any_brandt) {
        sig::brandt_labels(opt.r);
        brandt::brandt_module(opt.r)->extend(opt.ell_max);
    }

    std::vector<std::optional<ScanRecord>> recs(ells.size());
    std::vector<std::string> errs(ells.size());
    std::vector<char> internal(ells.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < ells.size(); i = next++) {
            try {
                recs[i] = scan_one(opt.r, ells[i], opt, i % opt.verify_stride == 0, adm);
            }
            catch (const invariant_error &e) {
                errs[i] = e.what();
                internal[i] = 1;
            }
            catch (const std::exception &e) {
                errs[i] = e.what();
            }
        }
    };
    const unsigned jobs = std::max(1u, opt.jobs);
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < jobs; ++k)
        pool.emplace_back(worker);
    worker();
    for (auto &t : pool)
        t.join();
    for (std::size_t i = 0; i < ells.size(); ++i) {
        if (recs[i])
            rep.records.push_back(*recs[i]);
        else
            rep.failures.push_back({ells[i], errs[i], internal[i] != 0});
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline std::string to_csv(const ScanReport &rep)
{
    std::ostringstream out;
    out << "r,p,ell,lambda_ell,lambda_delta,mu,routes_agree,in_admissible_set\n";
    for (const auto &r : rep.records) {
        out << r.r << ',' << r.p << ',' << r.ell << ',' << r.lambda_ell << ',' << r.lambda_delta << ',' << r.mu << ','
            << (r.routes_agree ? "true" : "false") << ',';
        if (r.in_admissible_set)
            out << (*r.in_admissible_set ? "true" : "false");
        out << '\n';
    }
    return out.str();
}

// Records from CSV text produced by to_csv.
inline std::vector<ScanRecord> records_from_csv(const std::string &text)
{
    std::istringstream in(text);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)) &&
                line == "r,p,ell,lambda_ell,lambda_delta,mu,routes_agree,in_admissible_set",
            "scan CSV: unexpected header");
    std::vector<ScanRecord> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (!line.empty() && line.back() == ',')
            f.emplace_back();
        require(f.size() == 8, "scan CSV: expected 8 fields in '" + line + "'");
        ScanRecord r;
        try {
            r.r = std::stoull(f[0]);
            r.p = std::stoull(f[1]);
            r.ell = static_cast<unsigned>(std::stoul(f[2]));
            r.lambda_ell = std::stoll(f[3]);
            r.lambda_delta = static_cast<unsigned>(std::stoul(f[4]));
            r.mu = static_cast<unsigned>(std::stoul(f[5]));
        }
        catch (const std::logic_error &) {
            throw input_error("scan CSV: bad number in '" + line + "'");
        }
        r.routes_agree = f[6] == "true";
        if (!f[7].empty())
            r.in_admissible_set = f[7] == "true";
        out.push_back(r);
    }
    return out;
}

inline json to_json(const ScanReport &rep, bool timing)
{
    const auto &o = rep.options;
    json meta = {{"version", version},
                 {"seed", o.seed},
                 {"caps",
                  {{"max_ell_velu", o.build.caps.max_ell},
                   {"max_extension_degree", o.build.caps.max_extension_degree},
                   {"auto_velu_max_ell", o.build.auto_velu_max_ell}}},
                 {"backend", sig::backend_name(o.build.backend)},
                 {"verify_stride", o.verify_stride},
                 {"n_max", o.n_max}};
    if (timing)
        meta["timing"] = {{"seconds", rep.seconds}, {"jobs", o.jobs}};
    json records = json::array();
    for (const auto &r : rep.records) {
        json j = {{"r", r.r},
                  {"p", r.p},
                  {"ell", r.ell},
                  {"lambda_ell", r.lambda_ell},
                  {"lambda_delta", r.lambda_delta},
                  {"mu", r.mu},
                  {"routes_agree", r.routes_agree},
                  {"in_admissible_set", r.in_admissible_set ? json(*r.in_admissible_set) : json(nullptr)},
                  {"verified", r.verified}};
        if (r.fit_lambda)
            j["fit_lambda"] = *r.fit_lambda;
        if (timing)
            j["seconds"] = r.seconds;
        records.push_back(j);
    }
    json hist = json::object(), freq = json::object();
    const auto h = rep.histogram();
    for (const auto &[lam, c] : h) {
        hist[std::to_string(lam)] = c;
        freq[std::to_string(lam)] = {{"count", c}, {"total", rep.records.size()},
                                     {"value", static_cast<double>(c) / static_cast<double>(rep.records.size())}};
    }
    json fails = json::array();
    for (const auto &f : rep.failures)
        fails.push_back({{"ell", f.ell}, {"reason", f.reason}, {"internal", f.internal}});
    json viol = json::array();
    for (const auto *r : rep.violations())
        viol.push_back({{"ell", r->ell}, {"lambda_ell", r->lambda_ell}});
    json out = {{"metadata", meta},
                {"r", o.r},
                {"p", o.p},
                {"ell_max", o.ell_max},
                {"records", records},
                {"histogram", hist},
                {"frequencies", freq},
                {"admissible", o.profile ? json(rep.admissible) : json(nullptr)},
                {"violations", viol},
                {"failures", fails}};
    if (o.profile)
        out["orbit_source"] = o.profile->source;
    return out;
}

} // namespace ssig::scan
