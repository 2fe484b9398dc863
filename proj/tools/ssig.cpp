// ssig: supersingular isogeny graphs, Z_p-towers and lambda-invariant scans.

#include <ssig/ssig.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace ssig;
using io::json;

namespace {

enum Exit { ok = 0, usage = 1, internal = 2, precision = 3 };

struct Common {
    u64 r = 0, p = 0;
    unsigned ell = 0, n = 0, n_max = 2, ell_max = 0;
    std::string backend = "auto", out, orbits_file, graph_file;
    u64 seed = 0x5eed5eedULL;
    unsigned jobs = 1, precision_M = 16, precision_K = 0, verify_stride = 10;
    unsigned max_ell = 50, max_ext = 24, auto_velu = 19;
    bool timing = false;
};

sig::BuildOptions build_options(const Common &c)
{
    sig::BuildOptions b;
    b.backend = sig::parse_backend(c.backend);
    b.caps.max_ell = c.max_ell;
    b.caps.max_extension_degree = c.max_ext;
    b.auto_velu_max_ell = c.auto_velu;
    b.seed = c.seed;
    return b;
}

std::string render(const IntMatrix &a)
{
    std::string s;
    for (const auto &row : a) {
        s += "  [";
        for (std::size_t j = 0; j < row.size(); ++j)
            s += (j ? " " : "") + std::to_string(row[j]);
        s += "]\n";
    }
    return s;
}

std::optional<spectra::OrbitProfile> find_profile(u64 r, const std::string &orbits_file)
{
    if (!orbits_file.empty())
        for (auto &o : io::orbits_from_json(io::read_json_file(orbits_file), orbits_file))
            if (o.r == r)
                return o;
    return spectra::shipped_profile(r);
}

int cmd_build_graph(const Common &c)
{
    const auto g = scan::load_or_build_sig(c.r, c.ell, build_options(c));
    const i64 ell = c.ell;
    std::cout << "SI(" << c.r << ", " << c.ell << ") via " << sig::backend_name(g.backend) << "\n";
    std::cout << "vertices: " << g.size() << "\n";
    for (const auto &v : g.vertices)
        std::cout << "  j" << v.index << " = " << v.j.to_string() << "\n";
    std::cout << "A =\n" << render(g.adjacency) << "D = " << ell + 1 << " * I\n";
    const auto cp = spectra::charpoly_adjacency(g.adjacency);
    std::cout << "charpoly: " << cp.to_string() << "\n";

    bool all = true;
    auto check = [&](const std::string &name, bool v) {
        std::cout << "  " << (v ? "pass" : "FAIL") << "  " << name << "\n";
        all = all && v;
    };
    std::cout << "checks:\n";
    check("vertex count = floor(r/12)", g.size() == c.r / 12);
    check("row sums = ell+1", spectra::eisenstein_check(g.adjacency, ell));
    check("symmetric", is_symmetric(g.adjacency));
    const auto x = sig::build_dsig(g);
    const bool bfs = x.connected();
    const bool spec = spectra::connectedness_via_spectrum(g.adjacency, ell);
    check("connected (BFS)", bfs);
    check("connected (spectrum)", spec);
    check("Deligne bound", spectra::deligne_bound_check(g.adjacency, ell));
    check("Cayley-Hamilton", spectra::cayley_hamilton_holds(g.adjacency, cp));
    if (c.r == 37 && spectra::newform_coefficients_37().count(c.ell))
        check("newform coefficients", spectra::newform_crosscheck(g.adjacency, c.ell));

    const std::string out = c.out.empty() ? "sig.json" : c.out;
    io::write_text_file(out, io::sig_to_json(g).dump(2) + "\n");
    std::cout << "wrote " << out << "\n";
    if (!c.graph_file.empty()) {
        const auto alpha = graph::constant_voltage(x, 1);
        io::write_text_file(c.graph_file, io::graph_to_json(x, &alpha).dump(2) + "\n");
        std::cout << "wrote " << c.graph_file << "\n";
    }
    return all ? ok : internal;
}

iwasawa::InvariantOptions invariant_options(const Common &c)
{
    iwasawa::InvariantOptions o;
    o.build = build_options(c);
    o.precision.M = c.precision_M;
    o.precision.K = c.precision_K;
    o.n_max = c.n_max;
    return o;
}

int cmd_invariants(const Common &c)
{
    if (c.ell % c.p != 1)
        std::cerr << "warning: ell = " << c.ell << " is not 1 mod p = " << c.p << "\n";
    const auto rep = iwasawa::lambda_invariant(c.r, c.ell, c.p, invariant_options(c));
    const std::string text = io::invariants_to_json(rep).dump(2) + "\n";
    std::cout << text;
    if (!c.out.empty())
        io::write_text_file(c.out, text);
    if (!rep.routes_agree) {
        std::cerr << "error: routes disagree\n";
        return internal;
    }
    return ok;
}

int cmd_tower(const Common &c)
{
    const auto gf = io::graph_from_json(io::read_json_file(c.graph_file));
    require(gf.integer_voltages.has_value(), "tower needs integer voltages in graph.json");
    const auto &x = gf.graph;
    const auto &alpha = *gf.integer_voltages;
    require(c.p != 2 && is_prime(c.p), "p must be an odd prime");
    json out = {{"vertices", x.vertex_count()}, {"edges", x.edge_count()}, {"p", c.p}};
    out["kappa"] = graph::spanning_tree_count(x).str();
    const unsigned K = c.precision_K ? c.precision_K : 2 * static_cast<unsigned>(x.vertex_count()) + 2;
    iwasawa::MuLambda ml;
    iwasawa::Precision pr;
    pr.M = c.precision_M;
    pr.K = K;
    const auto d = iwasawa::certified_delta(x, alpha, c.p, pr, ml);
    out["delta"] = io::series_to_json(d);
    out["mu"] = ml.mu;
    out["lambda"] = static_cast<i64>(ml.lambda) - 1;
    if (c.n_max >= 2) {
        const auto seq = iwasawa::ordp_complexity_sequence(x, alpha, c.p, c.n_max, 0);
        json t = json::array();
        for (const auto &l : seq)
            t.push_back({{"n", l.n}, {"ord_p_kappa", l.ord}});
        out["tower"] = t;
        try {
            const auto f = iwasawa::fit_iwasawa(seq, c.p);
            out["fit"] = {{"mu", f.mu}, {"lambda", f.lambda}, {"n_stable", f.n_stable}};
            out["nu"] = f.nu_stable ? json(f.nu) : json("unstable");
        }
        catch (const input_error &e) {
            out["fit"] = {{"error", e.what()}};
        }
    }
    const std::string text = out.dump(2) + "\n";
    std::cout << text;
    if (!c.out.empty())
        io::write_text_file(c.out, text);
    return ok;
}

int cmd_scan(const Common &c)
{
    scan::ScanOptions o;
    o.r = c.r;
    o.p = c.p;
    o.ell_max = c.ell_max;
    o.verify_stride = c.verify_stride;
    o.n_max = c.n_max;
    o.jobs = c.jobs;
    o.seed = c.seed;
    o.build = build_options(c);
    o.precision.M = c.precision_M;
    o.precision.K = c.precision_K;
    o.profile = find_profile(c.r, c.orbits_file);
    const auto rep = scan::run_scan(o);
    const std::string csv = scan::to_csv(rep);
    const json j = scan::to_json(rep, c.timing);
    if (c.out.empty()) {
        std::cout << csv;
    }
    else {
        io::write_text_file(c.out + ".csv", csv);
        io::write_text_file(c.out + ".json", j.dump(2) + "\n");
    }
    std::cerr << "records: " << rep.records.size() << ", failures: " << rep.failures.size() << "\n";
    for (const auto &[lam, n] : rep.histogram())
        std::cerr << "  lambda = " << lam << ": " << n << " (" << static_cast<double>(n) / rep.records.size() << ")\n";
    if (o.profile) {
        std::cerr << "admissible:";
        for (unsigned v : rep.admissible)
            std::cerr << " " << v;
        std::cerr << "\n";
    }
    for (const auto *v : rep.violations())
        std::cerr << "VIOLATION: ell = " << v->ell << " has lambda = " << v->lambda_ell << " outside the admissible set\n";
    bool bad = false;
    for (const auto &f : rep.failures) {
        std::cerr << "failed: ell = " << f.ell << ": " << f.reason << "\n";
        bad = bad || f.internal;
    }
    for (const auto &r : rep.records)
        bad = bad || !r.routes_agree || r.mu != 0;
    if (c.timing)
        std::cerr << "time: " << rep.seconds << " s\n";
    return bad ? internal : ok;
}

int cmd_level_structure(const Common &c)
{
    require(c.p % 2 == 1 && is_prime(c.p), "p must be an odd prime");
    require(c.r % c.p != 0 && c.ell % c.p != 0, "p must not divide r * ell");
    const auto g = scan::load_or_build_sig(c.r, c.ell, build_options(c));
    const auto x = sig::build_dsig(g);
    const auto rep = graph::level_structure_components(x, c.ell, c.p, c.n);
    const auto [y, units] = graph::level_structure_graph(x, c.ell, c.p, c.n);
    json out = {{"r", c.r},
                {"ell", c.ell},
                {"p", c.p},
                {"n", c.n},
                {"n0", rep.n0},
                {"vertices", y.vertex_count()},
                {"components", rep.components},
                {"expected_components", rep.expected_components},
                {"components_isomorphic", rep.components_isomorphic}};
    if (rep.n0 == 0) {
        const auto zero = graph::FiniteAbelianGroup::units(static_cast<i64>(ipow(c.p, c.n)));
        graph::VoltageAssignment a;
        const std::size_t fwd = zero.index({static_cast<i64>(c.ell % ipow(c.p, c.n))});
        for (std::size_t e = 0; e < x.edge_count(); ++e)
            a.values.push_back(e < x.edge(e).bar ? fwd : zero.inv(fwd));
        out["connectivity_criterion"] = graph::connectivity_criterion(x, a, zero);
    }
    const std::string text = out.dump(2) + "\n";
    std::cout << text;
    if (!c.out.empty())
        io::write_text_file(c.out, text);
    const bool consistent = rep.components == rep.expected_components && (rep.n0 == 0 || c.n < rep.n0 || rep.components_isomorphic);
    return consistent ? ok : internal;
}

int cmd_table(const Common &c)
{
    std::vector<spectra::OrbitProfile> rows;
    for (const auto &row : spectra::table1_rows())
        rows.push_back({row.r, row.sizes, "table1"});
    if (!c.orbits_file.empty())
        for (auto &o : io::orbits_from_json(io::read_json_file(c.orbits_file), c.orbits_file))
            rows.push_back(std::move(o));
    const auto bad = spectra::table1_transcription_mismatches();
    for (const auto &o : rows) {
        std::cout << o.r << "  s=" << o.sizes.size() << "  sizes=[";
        for (std::size_t i = 0; i < o.sizes.size(); ++i)
            std::cout << (i ? ", " : "") << o.sizes[i];
        std::cout << "]  lambda in {";
        const auto adm = spectra::admissible_lambdas(o.sizes);
        for (std::size_t i = 0; i < adm.size(); ++i)
            std::cout << (i ? ", " : "") << adm[i];
        std::cout << "}";
        if (o.source != "table1")
            std::cout << "  (" << o.source << ")";
        if (std::find(bad.begin(), bad.end(), o.r) != bad.end() && o.source == "table1")
            std::cout << "  [printed list differs]";
        std::cout << "\n";
    }
    return ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Supersingular isogeny graphs, Z_p-towers and Iwasawa lambda-invariants"};
    app.require_subcommand(1);
    Common c;

    auto add_build = [&](CLI::App *s) {
        s->add_option("--backend", c.backend, "auto, velu or brandt")->capture_default_str();
        s->add_option("--seed", c.seed, "seed for randomized root finding")->capture_default_str();
        s->add_option("--max-ell", c.max_ell, "largest ell for the Velu backend")->capture_default_str();
        s->add_option("--max-extension-degree", c.max_ext, "largest torsion field degree")->capture_default_str();
        s->add_option("--auto-velu-max-ell", c.auto_velu, "auto backend uses Velu up to this ell")->capture_default_str();
    };
    auto add_precision = [&](CLI::App *s) {
        s->add_option("--precision-M", c.precision_M, "coefficients mod p^M")->capture_default_str();
        s->add_option("--precision-K", c.precision_K, "series mod T^K (0: 2(h+1)+2)")->capture_default_str();
    };

    auto *bg = app.add_subcommand("build-graph", "build SI(r, ell), check its invariants and write sig.json");
    bg->add_option("--r", c.r)->required();
    bg->add_option("--ell", c.ell)->required();
    bg->add_option("--out", c.out, "sig.json path (default ./sig.json)");
    bg->add_option("--graph-out", c.graph_file, "also write X^{(r,ell)} with constant voltage as graph.json");
    add_build(bg);

    auto *inv = app.add_subcommand("invariants", "mu, lambda, nu of the constant Z_p-tower over X^{(r,ell)}");
    inv->add_option("--r", c.r)->required();
    inv->add_option("--ell", c.ell)->required();
    inv->add_option("--p", c.p)->required();
    inv->add_option("--n-max", c.n_max, "tower layers 0..n-max (0 skips the tower)")->capture_default_str();
    inv->add_option("--out", c.out, "also write the JSON report here");
    add_build(inv);
    add_precision(inv);

    auto *tw = app.add_subcommand("tower", "Iwasawa invariants of an arbitrary graph.json with integer voltages");
    tw->add_option("--graph", c.graph_file)->required();
    tw->add_option("--p", c.p)->required();
    tw->add_option("--n-max", c.n_max)->capture_default_str();
    tw->add_option("--out", c.out);
    add_precision(tw);

    auto *sc = app.add_subcommand("scan", "lambda_ell for all primes ell = 1 (mod p) up to ell-max");
    sc->add_option("--r", c.r)->required();
    sc->add_option("--p", c.p)->required();
    sc->add_option("--ell-max", c.ell_max)->required();
    sc->add_option("--orbits-file", c.orbits_file, "JSON orbit sizes [{r, sizes}] beyond the shipped table");
    sc->add_option("--jobs", c.jobs)->capture_default_str();
    sc->add_option("--verify-stride", c.verify_stride, "run series and tower routes on every k-th record")
        ->capture_default_str();
    sc->add_option("--n-max", c.n_max, "tower layers for verified records")->capture_default_str();
    sc->add_option("--out", c.out, "write <out>.csv and <out>.json instead of CSV on stdout");
    sc->add_flag("--timing", c.timing, "include wall-clock timing in the report");
    add_build(sc);
    add_precision(sc);

    auto *ls = app.add_subcommand("level-structure", "components of the level-structure cover Y_n");
    ls->add_option("--r", c.r)->required();
    ls->add_option("--ell", c.ell)->required();
    ls->add_option("--p", c.p)->required();
    ls->add_option("--n", c.n)->required();
    ls->add_option("--out", c.out);
    add_build(ls);

    auto *tb = app.add_subcommand("table", "admissible lambda values from newform orbit sizes");
    tb->add_option("--orbits-file", c.orbits_file);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }
    try {
        if (*bg)
            return cmd_build_graph(c);
        if (*inv)
            return cmd_invariants(c);
        if (*tw)
            return cmd_tower(c);
        if (*sc)
            return cmd_scan(c);
        if (*ls)
            return cmd_level_structure(c);
        if (*tb)
            return cmd_table(c);
    }
    catch (const input_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    catch (const precision_error &e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return precision;
    }
    catch (const invariant_error &e) {
        std::cerr << "internal invariant violated: " << e.what() << "\n";
        return internal;
    }
    catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    return usage;
}
