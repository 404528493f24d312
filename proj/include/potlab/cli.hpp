#pragma once

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "potlab/demo.hpp"

namespace potlab {

// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 budget exceeded.
enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kInputError = 2, kBudgetExceeded = 3 };

namespace detail {

inline void emit(const nlohmann::json& j, const std::string& format, const std::string& out_path,
                 std::ostream& out) {
    std::string body = format == "json" ? j.dump(2) + "\n" : render_text(j);
    if (out_path.empty()) {
        out << body;
    } else {
        std::ofstream f(out_path);
        if (!f) throw InstanceError("cannot write " + out_path);
        f << body;
    }
}

inline PointPair parse_point_arg(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw InstanceError("point must look like \"x,y\": " + s);
    return PointPair(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

inline void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path);
    if (!f) throw InstanceError("cannot write " + path);
    f << body;
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"potlab: maximal inner variations, c-path boundedness, and c-potentials on finite instances"};
    app.require_subcommand(1);

    double tolerance = -1.0;  // < 0: keep the instance's own
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    int max_walk_len = 0;
    std::string format = "text";
    app.add_option("--tolerance", tolerance, "override the instance tolerance");
    app.add_option("--seed", seed_override, "override the instance seed")
        ->each([&](const std::string&) { seed_set = true; });
    app.add_option("--max-walk-len", max_walk_len,
                   "walk-enumeration cross-check length (analyze; 0 = off)");
    app.add_option("--output", format, "report format")
        ->check(CLI::IsMember({"text", "json", "dot"}));

    std::string path, out_path, svg_path, values_path, emit_path;
    bool full_matrix = false;

    auto* analyze = app.add_subcommand("analyze", "flags, F matrix, condensation, ball chains");
    analyze->add_option("instance", path)->required();
    analyze->add_option("--out", out_path, "write the report here instead of stdout");
    analyze->add_option("--svg", svg_path, "plot the instance (2-coordinate only)");
    analyze->add_flag("--full-matrix", full_matrix, "always include the full F table");

    std::string method = "auto", terminals_arg;
    std::uint64_t order_seed = 0;
    bool order_seed_set = false;
    auto* potential = app.add_subcommand("potential", "construct and verify a c-antiderivative / potential");
    potential->add_option("instance", path)->required();
    potential->add_option("--method", method)
        ->check(CLI::IsMember({"incremental", "sinks", "sources", "auto"}));
    potential->add_option("--terminals", terminals_arg, "comma-separated node indices");
    potential->add_option("--order-seed", order_seed, "shuffle the incremental order")
        ->each([&](const std::string&) { order_seed_set = true; });
    potential->add_option("--out", out_path);

    auto* verify = app.add_subcommand("verify", "check a user-supplied antiderivative");
    verify->add_option("instance", path)->required();
    verify->add_option("--values", values_path, "JSON file with {\"values\": [...]}")->required();
    verify->add_option("--out", out_path);

    std::string order_arg = "ominus";
    double density = 10.0;
    auto* extend = app.add_subcommand("extend", "chain-extension pipeline (R^2)");
    extend->add_option("instance", path)->required();
    extend->add_option("--order", order_arg)->check(CLI::IsMember({"ominus", "oplus"}));
    extend->add_option("--density", density, "extension samples per unit length");
    extend->add_option("--emit-extension", emit_path, "write the extension as an instance file");
    extend->add_option("--svg", svg_path);
    extend->add_option("--out", out_path);

    int levels = 6;
    std::string start_arg, end_arg;
    auto* growth = app.add_subcommand("growth", "F across nested dyadic refinements of the segments");
    growth->add_option("instance", path)->required();
    growth->add_option("--levels", levels);
    growth->add_option("--start", start_arg, "\"x,y\" (must lie on every level)")->required();
    growth->add_option("--end", end_arg, "\"x,y\"")->required();
    growth->add_option("--out", out_path);

    std::string demo_name;
    auto* demo = app.add_subcommand("demo", "run a bundled scenario against golden expectations");
    demo->add_option("name", demo_name)->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kInputError;
    }

    try {
        if (demo->parsed()) {
            out << "demo " << demo_name << "\n";
            return run_demo(demo_name, out);
        }

        Instance inst = parse_instance(path);
        if (tolerance > 0.0) inst.tolerance = tolerance;
        if (seed_set) inst.seed = seed_override;

        if (analyze->parsed()) {
            AnalyzeOptions opts;
            opts.full_matrix = full_matrix;
            opts.oracle_max_len = max_walk_len;
            nlohmann::json rep = analyze_report(inst, opts);
            if (format == "dot") {
                VariationGraph g = build_variation_graph(inst);
                std::string dot = condensation_to_dot(condensation(g));
                if (out_path.empty()) out << dot; else detail::write_file(out_path, dot);
            } else {
                detail::emit(rep, format, out_path, out);
            }
            if (!svg_path.empty()) {
                if (inst.cost->domain_open() && inst.dim() == 1) {
                    BallStructure balls = ball_chain_components(inst);
                    detail::write_file(svg_path, svg_plot(inst, &balls));
                } else {
                    detail::write_file(svg_path, svg_plot(inst));
                }
            }
            return kOk;
        }

        if (potential->parsed()) {
            VariationGraph g = build_variation_graph(inst);
            VariationMatrix m = all_pairs_variation(g, inst.tolerance);
            nlohmann::json rep;
            rep["schema"] = "potlab-report/1";
            rep["instance_digest"] = instance_digest(inst);
            rep["conventions"] = conventions_json(inst);
            rep["flags"] = {{"path_bounded", m.path_bounded},
                            {"cyclically_monotone", m.cyclically_monotone}};

            Antiderivative f;
            if (method == "incremental") {
                std::vector<int> order = identity_order(m.n);
                if (order_seed_set) {
                    std::mt19937_64 rng(order_seed);
                    std::shuffle(order.begin(), order.end(), rng);
                    rep["order"] = order;
                }
                f = construct_incremental(m, order, inst.tolerance);
                nlohmann::json trace = nlohmann::json::array();
                for (const auto& st : f.trace) {
                    trace.push_back({{"node", st.node},
                                     {"alpha", extreal_to_json(st.alpha)},
                                     {"beta", extreal_to_json(st.beta)},
                                     {"gamma", st.gamma}});
                }
                rep["trace"] = trace;
            } else {
                std::vector<int> terms;
                if (method == "auto" || terminals_arg.empty()) {
                    terms = select_terminals_auto(condensation(g));
                } else {
                    std::stringstream ss(terminals_arg);
                    std::string tok;
                    while (std::getline(ss, tok, ',')) terms.push_back(std::stoi(tok));
                }
                rep["terminals"] = terms;
                auto dir = method == "sources" ? BoundaryDirection::Sources : BoundaryDirection::Sinks;
                BoundaryConstruction bc = construct_from_boundary(m, dir, terms);
                if (!bc.ok) {
                    rep["failure"] = {{"unreachable_terminals", bc.unreachable_nodes},
                                      {"path_bound_obstruction", bc.unbounded_nodes}};
                    detail::emit(rep, format, out_path, out);
                    return kVerificationFailure;
                }
                f = bc.f;
            }
            rep["construction"] = to_string(f.construction);
            rep["values"] = f.values;
            VerifyResult vr = verify_antiderivative(g, f.values, inst.tolerance);
            rep["verify"] = verify_to_json(vr);
            bool ok = vr.all_ok();
            if (ok) {
                auto psi = collapse_to_psi(g, f.values, inst.tolerance);
                nlohmann::json pj = nlohmann::json::array();
                for (const auto& [x, v] : psi) pj.push_back({{"x", x}, {"psi", v}});
                rep["psi"] = pj;
                Potential pot = extend_potential(g, inst.cost, psi, inst.tolerance);
                SubdiffResult sd = check_subdifferential(g, pot, {}, inst.tolerance);
                rep["subdifferential"] = {{"ok", sd.ok}, {"witnesses", sd.witnesses.size()}};
                ok = ok && sd.ok;
            }
            detail::emit(rep, format, out_path, out);
            return ok ? kOk : kVerificationFailure;
        }

        if (verify->parsed()) {
            std::ifstream vf(values_path);
            if (!vf) throw InstanceError("cannot open values file: " + values_path);
            nlohmann::json vj;
            vf >> vj;
            std::vector<double> values = vj.at("values").get<std::vector<double>>();
            VariationGraph g = build_variation_graph(inst);
            VerifyResult vr = verify_antiderivative(g, values, inst.tolerance);
            nlohmann::json rep;
            rep["schema"] = "potlab-report/1";
            rep["instance_digest"] = instance_digest(inst);
            rep["conventions"] = conventions_json(inst);
            rep["verify"] = verify_to_json(vr);
            detail::emit(rep, format, out_path, out);
            return vr.all_ok() ? kOk : kVerificationFailure;
        }

        if (extend->parsed()) {
            Order order = order_arg == "ominus" ? Order::Ominus : Order::Oplus;
            PipelineOptions opts;
            opts.density = density;
            PipelineResult pr = extension_pipeline(inst, order, opts);
            nlohmann::json rep;
            rep["schema"] = "potlab-report/1";
            rep["instance_digest"] = instance_digest(inst);
            rep["conventions"] = conventions_json(inst);
            rep["order"] = to_string(order);
            nlohmann::json hyp = nlohmann::json::array();
            for (const auto& h : pr.hypotheses) {
                hyp.push_back({{"hypothesis", h.name}, {"ok", h.ok}, {"note", h.note}});
            }
            rep["hypotheses"] = hyp;
            rep["ok"] = pr.ok;
            if (!pr.ok) rep["failure"] = pr.failure;
            if (pr.hypotheses_ok) {
                rep["extension"] = {
                    {"points", pr.extension_instance.points.size()},
                    {"dropped_off_domain", pr.dropped_off_domain},
                    {"strongly_connected", pr.extension_strongly_connected},
                    {"path_bounded", pr.extension_path_bounded},
                };
                if (pr.ok) {
                    rep["extension"]["verify"] = verify_to_json(pr.extension_verify);
                    rep["restricted_verify"] = verify_to_json(pr.restricted_verify);
                }
                if (!emit_path.empty()) {
                    detail::write_file(emit_path, instance_to_json(pr.extension_instance).dump(2) + "\n");
                }
                if (!svg_path.empty()) {
                    detail::write_file(svg_path, svg_plot(inst, nullptr, &pr.ce.extension));
                }
            }
            detail::emit(rep, format, out_path, out);
            return pr.ok ? kOk : kVerificationFailure;
        }

        if (growth->parsed()) {
            if (inst.segments.empty()) throw InstanceError("growth needs segments to refine");
            if (levels < 1 || levels > 14) {
                throw InstanceError("growth supports 1..14 refinement levels");
            }
            PointPair s = detail::parse_point_arg(start_arg);
            PointPair e = detail::parse_point_arg(end_arg);
            std::vector<std::vector<PointPair>> lv;
            for (int k = 1; k <= levels; ++k) {
                std::vector<PointPair> pts(inst.points.begin(),
                                           inst.points.begin() + inst.explicit_count);
                for (const auto& seg : inst.segments) {
                    std::int64_t denom = std::int64_t{1} << k;
                    std::int64_t last = seg.half_open ? denom - 1 : denom;
                    for (std::int64_t j = 0; j <= last; ++j) {
                        pts.push_back(seg.at(double(j) / double(denom)));
                    }
                }
                lv.push_back(std::move(pts));
            }
            GrowthResult gr = variation_growth(*inst.cost, lv, s, e, inst.tolerance);
            nlohmann::json rep;
            rep["schema"] = "potlab-report/1";
            rep["instance_digest"] = instance_digest(inst);
            rep["conventions"] = conventions_json(inst);
            nlohmann::json vals = nlohmann::json::array();
            for (const auto& v : gr.values) vals.push_back(extreal_to_json(v));
            rep["growth"] = vals;
            rep["non_decreasing"] = gr.monotone_certificate;
            rep["levels_cyclically_monotone"] = gr.level_cyclically_monotone;
            detail::emit(rep, format, out_path, out);
            bool cyc = true;
            for (bool b : gr.level_cyclically_monotone) cyc = cyc && b;
            return gr.monotone_certificate && cyc ? kOk : kVerificationFailure;
        }
    } catch (const BudgetError& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return kBudgetExceeded;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace potlab
