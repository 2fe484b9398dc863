#pragma once

// JSON formats: sig.json, graph.json and orbit-profile files.

#include "iwasawa.hpp"

#include <json.hpp>

#include <fstream>

namespace ssig::io {

using json = nlohmann::json;

inline json sig_to_json(const sig::IsogenyDigraph &g)
{
    json v = json::array();
    for (const auto &x : g.vertices)
        v.push_back(x.j.to_string());
    return {{"r", g.r}, {"ell", g.ell}, {"backend", sig::backend_name(g.backend)}, {"vertices", v},
            {"adjacency", g.adjacency}};
}

inline sig::IsogenyDigraph sig_from_json(const json &j)
{
    try {
        sig::IsogenyDigraph g;
        g.r = j.at("r").get<u64>();
        g.ell = j.at("ell").get<unsigned>();
        sig::require_scope(g.r);
        auto F = ff::make_field(g.r, 2);
        for (const auto &s : j.at("vertices"))
            g.vertices.push_back({ff::parse_element(F, s.get<std::string>()), g.vertices.size()});
        g.adjacency = j.at("adjacency").get<IntMatrix>();
        if (j.contains("backend"))
            g.backend = sig::parse_backend(j["backend"].get<std::string>());
        sig::assert_sig_invariants(g);
        return g;
    }
    catch (const json::exception &e) {
        throw input_error(std::string("malformed sig.json: ") + e.what());
    }
    catch (const invariant_error &e) {
        throw input_error(std::string("sig.json violates an isogeny graph invariant: ") + e.what());
    }
}

struct GraphFile {
    graph::SerreGraph graph;
    std::optional<std::vector<i64>> integer_voltages;
    std::optional<std::vector<graph::GroupElement>> tuple_voltages;
};

inline json graph_to_json(const graph::SerreGraph &x, const std::vector<i64> *voltages = nullptr)
{
    json edges = json::array();
    for (std::size_t e = 0; e < x.edge_count(); ++e)
        edges.push_back({{"id", e}, {"o", x.edge(e).o}, {"t", x.edge(e).t}, {"bar", x.edge(e).bar}});
    json out = {{"vertices", x.vertex_count()}, {"edges", edges}};
    if (voltages) {
        json v = json::object();
        for (std::size_t e = 0; e < voltages->size(); ++e)
            v[std::to_string(e)] = (*voltages)[e];
        out["voltages"] = v;
    }
    return out;
}

inline GraphFile graph_from_json(const json &j)
{
    try {
        const std::size_t n = j.at("vertices").get<std::size_t>();
        const auto &es = j.at("edges");
        std::vector<graph::Edge> edges(es.size());
        std::vector<bool> seen(es.size(), false);
        for (const auto &e : es) {
            const std::size_t id = e.at("id").get<std::size_t>();
            require(id < es.size() && !seen[id], "graph.json: edge ids must be 0..|E|-1 without repeats");
            seen[id] = true;
            edges[id] = {e.at("o").get<std::size_t>(), e.at("t").get<std::size_t>(), e.at("bar").get<std::size_t>()};
        }
        GraphFile out;
        try {
            out.graph = graph::SerreGraph(n, std::move(edges));
        }
        catch (const invariant_error &e) {
            throw input_error(std::string("graph.json is not a Serre graph: ") + e.what());
        }
        if (j.contains("voltages")) {
            const auto &v = j["voltages"];
            const std::size_t m = out.graph.edge_count();
            require(v.size() == m, "graph.json: voltages must cover every edge");
            bool tuples = false;
            for (const auto &[k, val] : v.items())
                tuples = tuples || val.is_array();
            if (tuples) {
                std::vector<graph::GroupElement> t(m);
                for (const auto &[k, val] : v.items())
                    t.at(std::stoul(k)) = val.is_array() ? val.get<graph::GroupElement>() : graph::GroupElement{val.get<i64>()};
                out.tuple_voltages = std::move(t);
            }
            else {
                std::vector<i64> t(m);
                for (const auto &[k, val] : v.items())
                    t.at(std::stoul(k)) = val.get<i64>();
                out.integer_voltages = std::move(t);
            }
        }
        return out;
    }
    catch (const json::exception &e) {
        throw input_error(std::string("malformed graph.json: ") + e.what());
    }
    catch (const std::out_of_range &e) {
        throw input_error(std::string("malformed graph.json: ") + e.what());
    }
}

// [{"r": 37, "sizes": [1, 1]}, ...] or {"orbits": [...]}.
inline std::vector<spectra::OrbitProfile> orbits_from_json(const json &j, const std::string &source)
{
    try {
        const json &rows = j.is_object() ? j.at("orbits") : j;
        std::vector<spectra::OrbitProfile> out;
        for (const auto &row : rows) {
            spectra::OrbitProfile o{row.at("r").get<u64>(), row.at("sizes").get<std::vector<unsigned>>(), source};
            spectra::check_profile(o);
            out.push_back(std::move(o));
        }
        return out;
    }
    catch (const json::exception &e) {
        throw input_error("malformed orbits file " + source + ": " + e.what());
    }
}

inline json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open " + path);
    try {
        return json::parse(in);
    }
    catch (const json::exception &e) {
        throw input_error("cannot parse " + path + ": " + e.what());
    }
}

inline void write_text_file(const std::string &path, const std::string &text)
{
    std::ofstream out(path);
    require(static_cast<bool>(out), "cannot write " + path);
    out << text;
}

inline json series_to_json(const iwasawa::PadicTruncSeries &s)
{
    json c = json::array();
    for (const auto &v : s.coeffs())
        c.push_back(v.str());
    return {{"p", s.p()}, {"M", s.M()}, {"K", s.K()}, {"coeffs", c}, {"text", s.to_string()}};
}

inline json invariants_to_json(const iwasawa::InvariantsReport &r)
{
    json routes = json::object();
    if (r.series.ran)
        routes["series"] = {{"lambda_delta", r.series.lambda_delta}, {"mu", r.series.mu}};
    if (r.charpoly.ran)
        routes["charpoly"] = {{"lambda_delta", r.charpoly.lambda_delta}, {"mu", r.charpoly.mu}};
    json tower = json::array();
    for (const auto &l : r.tower)
        tower.push_back({{"n", l.n}, {"ord_p_kappa", l.ord}});
    if (r.fit)
        routes["fit"] = {{"mu", r.fit->mu}, {"lambda", r.fit->lambda}, {"n_stable", r.fit->n_stable}};
    else if (!r.tower.empty())
        routes["fit"] = {{"error", r.fit_error}};
    json out = {{"r", r.r},
                {"p", r.p},
                {"ell", r.ell},
                {"vertices", r.vertices},
                {"mu", r.mu},
                {"lambda", r.lambda_ell},
                {"lambda_delta", r.lambda_delta},
                {"routes", routes},
                {"routes_agree", r.routes_agree}};
    if (r.fit && r.fit->nu_stable) {
        out["nu"] = r.fit->nu;
        out["n_stable"] = r.fit->n_stable;
    }
    else {
        out["nu"] = "unstable";
        out["n_stable"] = r.fit ? json(r.fit->n_stable) : json(nullptr);
    }
    if (!r.tower.empty())
        out["tower"] = tower;
    if (r.delta) {
        out["delta"] = series_to_json(*r.delta);
        out["factorization_identity"] = r.factorization_identity;
    }
    return out;
}

} // namespace ssig::io
