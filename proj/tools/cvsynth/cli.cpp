/* Copyright 2026 The cvsynth Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "bench.hpp"
#include "cvsynth/ccsearch.hpp"
#include "cvsynth/controlled.hpp"
#include "cvsynth/counting.hpp"
#include "cvsynth/error.hpp"
#include "cvsynth/gateset.hpp"
#include "cvsynth/mitm.hpp"
#include "cvsynth/parallel.hpp"
#include "targets.hpp"

namespace cvsynth::cli {

namespace {

using json = nlohmann::ordered_json;

struct Global {
    std::size_t workers = 0;
    bool json = false;
    bool deterministic = false;
};

struct LimitFlags {
    int max_vcount = -1;
    std::size_t max_memory_mb = 0;

    void add(CLI::App* app) {
        app->add_option("--max-vcount", max_vcount, "Longest word searched (default per dimension)");
        app->add_option("--max-memory-mb", max_memory_mb, "Search memory cap in MiB (default: min(8 GiB, RAM/2))");
    }
    Limits limits(const Global& g) const {
        Limits l;
        l.max_vcount = max_vcount;
        l.workers = g.workers;
        if (max_memory_mb > 0) {
            l.max_memory_bytes = max_memory_mb << 20;
        } else {
            const long pages = sysconf(_SC_PHYS_PAGES);
            const long page = sysconf(_SC_PAGE_SIZE);
            if (pages > 0 && page > 0) {
                l.max_memory_bytes = std::min(l.max_memory_bytes, static_cast<std::size_t>(pages) * static_cast<std::size_t>(page) / 2);
            }
        }
        return l;
    }
};

double elapsed(const Global& g, double s) { return g.deterministic ? 0.0 : s; }

void print_value(std::ostream& out, const json& v, int indent);

void print_object(std::ostream& out, const json& obj, int indent) {
    std::size_t width = 0;
    for (const auto& [k, v] : obj.items()) width = std::max(width, k.size());
    for (const auto& [k, v] : obj.items()) {
        out << std::string(static_cast<std::size_t>(indent), ' ') << k;
        if (v.is_object() || (v.is_array() && !v.empty() && v.front().is_object())) {
            out << ":\n";
            print_value(out, v, indent + 2);
        } else {
            out << std::string(width - k.size() + 2, ' ');
            print_value(out, v, indent);
            out << '\n';
        }
    }
}

void print_value(std::ostream& out, const json& v, int indent) {
    if (v.is_object()) {
        print_object(out, v, indent);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            out << std::string(static_cast<std::size_t>(indent), ' ') << "[" << i << "]\n";
            print_object(out, v[i], indent + 2);
        }
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out << ", ";
            print_value(out, v[i], indent);
        }
    } else if (v.is_string()) {
        out << v.get<std::string>();
    } else if (v.is_number_float()) {
        out << format_double(v.get<double>());
    } else {
        out << v.dump();
    }
}

void emit(std::ostream& out, const Global& g, json report) {
    if (g.json) {
        json full;
        full["schema"] = kReportSchema;
        for (auto& [k, v] : report.items()) full[k] = v;
        out << full.dump(2) << '\n';
    } else {
        print_object(out, report, 0);
    }
}

int exit_for(SynthStatus s) { return s == SynthStatus::ok ? kExitOk : kExitLimit; }

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- synth

struct SynthCmd {
    std::string target;
    double eps = 1e-2;
    std::string gateset = "v1q";
    std::string suffixes;
    std::optional<int> min_error_vcount;
    LimitFlags lim;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("synth", "Shortest word over a gate set within epsilon of a target");
        c->add_option("--target", target, "file:<path>, haar:<d>:<seed> or a named gate")->required();
        c->add_option("--eps", eps, "Accuracy in the phase-invariant distance");
        c->add_option("--gateset", gateset, "v1q, v2q, v3q, cc or a gate set JSON file");
        c->add_option("--suffixes", suffixes, "pauli, clifford (single qubit) or a suffix JSON file");
        c->add_option("--min-error-vcount", min_error_vcount, "Report the closest word of at most this length instead");
        lim.add(c);
    }

    int run(const Global& g, std::ostream& out) const {
        GateSet gs = parse_gateset_spec(gateset);
        if (suffixes == "clifford") {
            gs = gs.with_suffixes(suffix_set(SuffixKind::clifford_1q_mod_phase, gs.num_qubits()));
        } else if (suffixes == "pauli") {
            gs = gs.with_suffixes(suffix_set(gs.num_qubits() == 1 ? SuffixKind::pauli_1q : SuffixKind::pauli_nq, gs.num_qubits()));
        } else if (!suffixes.empty()) {
            gs = gs.with_suffixes(load_suffixes(suffixes));
        }
        const UMat t = parse_target(target);
        if (t.rows() != gs.dim()) {
            throw DimensionMismatch("target has dimension " + std::to_string(t.rows()) + ", gate set " +
                                    std::to_string(gs.dim()));
        }
        MitmSearcher searcher(gs, lim.limits(g));
        const auto t0 = std::chrono::steady_clock::now();
        SynthResult r = min_error_vcount ? searcher.min_error(t, *min_error_vcount) : searcher.search(t, eps);
        const double secs = since(t0);
        if (r.status == SynthStatus::ok) verify(r, t, gs);

        json rep;
        rep["command"] = "synth";
        rep["method"] = min_error_vcount ? "mitm-min-error" : "mitm";
        rep["target"] = target;
        rep["gateset"] = gateset;
        rep["status"] = to_string(r.status);
        if (!min_error_vcount) rep["epsilon"] = eps;
        rep["vcount"] = r.vcount;
        rep["error"] = r.error;
        rep["word"] = word_text(gs, r.word);
        rep["suffix"] = gs.suffixes().empty() ? std::string("I") : gs.suffixes()[r.word.suffix].label;
        rep["circuit"] = to_text(word_circuit(gs, r.word), gs.num_qubits() > 1);
        rep["nodes_expanded"] = r.nodes_expanded;
        rep["elapsed_s"] = elapsed(g, secs);
        if (!r.message.empty()) rep["message"] = r.message;
        emit(out, g, rep);
        return exit_for(r.status);
    }
};

// ---------------------------------------------------------------- synth-cc

struct SynthCcCmd {
    std::string target;
    double eps = 1e-2;
    bool commutation_filter = false;
    bool no_dedup = false;
    std::optional<int> min_error_length;
    LimitFlags lim;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("synth-cc", "Conditionally controlled gate C(A', B') with A'^dagger B' near a target");
        c->add_option("--target", target, "Single-qubit target spec")->required();
        c->add_option("--eps", eps, "Accuracy");
        c->add_flag("--commutation-filter", commutation_filter, "Drop out-of-order commuting step pairs");
        c->add_flag("--no-dedup", no_dedup, "Keep duplicate centers");
        c->add_option("--min-error-length", min_error_length, "Report the closest word of at most this length instead");
        lim.add(c);
    }

    int run(const Global& g, std::ostream& out) const {
        const UMat t = parse_target(target);
        if (t.rows() != 2) throw DimensionMismatch("synth-cc needs a single-qubit target");
        CcOptions opt;
        opt.limits = lim.limits(g);
        opt.dedup_centers = !no_dedup;
        opt.commutation_filter = commutation_filter;
        CcSearcher searcher(opt);
        const auto t0 = std::chrono::steady_clock::now();
        const CcResult r = min_error_length ? searcher.min_error(t, *min_error_length) : searcher.search(t, eps);
        const double secs = since(t0);

        json rep;
        rep["command"] = "synth-cc";
        rep["method"] = min_error_length ? "cc-min-error" : "cc";
        rep["target"] = target;
        rep["status"] = to_string(r.status);
        if (!min_error_length) rep["epsilon"] = eps;
        rep["vcount"] = r.vcount();
        rep["error"] = r.error;
        rep["cc_word"] = r.word.text();
        rep["circuit"] = to_text(emit_circuit(r.word));
        rep["nodes_expanded"] = r.nodes_expanded;
        rep["elapsed_s"] = elapsed(g, secs);
        if (!r.message.empty()) rep["message"] = r.message;
        emit(out, g, rep);
        return exit_for(r.status);
    }
};

// ---------------------------------------------------------------- synth-controlled

struct SynthControlledCmd {
    std::string blocks;
    double eps = 1e-2;
    bool narrow = false;
    bool allow_n4 = false;
    double stage1_fraction = 0.5;
    LimitFlags lim;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("synth-controlled", "Generalized controlled gate A_0 + ... + A_{N-1}");
        c->add_option("--blocks", blocks, "Comma-separated single-qubit target specs, 2^(n-1) of them")->required();
        c->add_option("--eps", eps, "Total accuracy");
        c->add_flag("--narrow", narrow, "Require A_0 = I; the residual is then exact");
        c->add_flag("--allow-n4", allow_n4, "Permit four-qubit gates");
        c->add_option("--stage1-fraction", stage1_fraction, "Share of epsilon for the cc stage (two qubits)");
        lim.add(c);
    }

    int run(const Global& g, std::ostream& out) const {
        std::vector<UMat> bs;
        const auto specs = split_list(blocks);
        for (const auto& s : specs) bs.push_back(parse_target(s));
        int n = 1;
        while ((std::size_t{1} << (n - 1)) < bs.size()) ++n;
        if ((std::size_t{1} << (n - 1)) != bs.size() || n < 2) {
            throw DimensionMismatch("block count must be a power of two >= 2, got " + std::to_string(bs.size()));
        }
        const GeneralizedControlled gc = GeneralizedControlled::make(n, bs);
        if (narrow && (n != 2 || (gc.blocks[0] - identity(2)).cwiseAbs().maxCoeff() > 1e-12)) {
            throw ValidationError("--narrow needs two blocks with the first equal to I");
        }
        ControlledOptions opt;
        opt.limits = lim.limits(g);
        opt.stage1_fraction = stage1_fraction;
        opt.decompose.allow_n4 = allow_n4;
        const DecompositionPlan plan = decompose_generalized(gc, opt.decompose);

        ControlledSynthesizer syn(opt);
        const auto t0 = std::chrono::steady_clock::now();
        const ControlledCircuit c = n == 2 ? syn.synth_2q(gc.blocks[0], gc.blocks[1], eps) : syn.synth(gc, eps);
        const double secs = since(t0);

        json rep;
        rep["command"] = "synth-controlled";
        rep["n"] = n;
        rep["blocks"] = specs;
        rep["status"] = to_string(c.status);
        rep["epsilon"] = eps;
        rep["reassembly_error"] = reassembly_error(plan, gc);
        rep["vcount"] = c.vcount;
        rep["error"] = c.error;
        rep["error_bound"] = c.error_bound;
        json segs = json::array();
        for (const auto& s : c.segments) {
            json j;
            j["kind"] = s.kind == Segment::Kind::cc ? "cc" : "residual";
            if (s.kind == Segment::Kind::cc) {
                j["index"] = s.index;
                j["cc_word"] = s.cc_word.text();
                j["sign_flip"] = s.sign_flip;
            } else {
                j["word"] = word_text(syn.su2().gateset(), s.residual_word);
            }
            j["status"] = to_string(s.status);
            j["epsilon"] = s.epsilon;
            j["stage_error"] = s.stage_error;
            j["error"] = s.error;
            j["vcount"] = s.vcount;
            segs.push_back(j);
        }
        rep["segments"] = segs;
        rep["circuit"] = to_text(c.circuit);
        rep["nodes_expanded"] = c.nodes_expanded;
        rep["elapsed_s"] = elapsed(g, secs);
        if (!c.message.empty()) rep["message"] = c.message;
        emit(out, g, rep);
        return exit_for(c.status);
    }
};

// ---------------------------------------------------------------- bench

struct BenchCmd {
    std::string method = "mitm";
    std::string eps_grid;
    std::string vcount_grid;
    int num_targets = 10;
    std::uint64_t seed = 1;
    std::string out_path;
    LimitFlags lim;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("bench", "Sweep Haar targets and write CSV rows");
        c->add_option("--method", method, "mitm, cc, controlled-narrow, controlled, controlled-n3, mitm-su4");
        auto* e = c->add_option("--eps-grid", eps_grid, "Comma-separated accuracies (minimum vcount per target)");
        auto* v = c->add_option("--vcount-grid", vcount_grid, "Comma-separated lengths (minimum error per target)");
        e->excludes(v);
        c->add_option("--num-targets", num_targets, "Targets per grid point");
        c->add_option("--seed", seed, "Target t uses seed + t");
        c->add_option("--out", out_path, "CSV file (default stdout)");
        lim.add(c);
    }

    int run(const Global& g, std::ostream& out, std::ostream& err) const {
        BenchConfig cfg;
        cfg.method = method;
        cfg.eps_grid = parse_doubles(eps_grid);
        cfg.vcount_grid = parse_ints(vcount_grid);
        cfg.num_targets = num_targets;
        cfg.seed = seed;
        cfg.deterministic = g.deterministic;
        cfg.limits = lim.limits(g);
        BenchRunner runner(cfg);

        std::ofstream file;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) throw ParseError("cannot write '" + out_path + "'");
        }
        std::ostream& csv = out_path.empty() ? out : file;
        std::ostream& info = out_path.empty() ? err : out;
        csv << kCsvHeader << '\n';
        std::vector<BenchRow> rows;
        bool failed = false;
        runner.run([&](const BenchRow& r) {
            csv << csv_row(r) << '\n';
            csv.flush();
            failed = failed || !r.ok;
            rows.push_back(r);
        });

        std::size_t distinct = 0;
        {
            std::vector<double> es = cfg.eps_grid;
            std::sort(es.begin(), es.end());
            distinct = static_cast<std::size_t>(std::unique(es.begin(), es.end()) - es.begin());
        }
        if (distinct >= 2) {
            for (const auto& [name, base] : {std::pair{"log5", 5.0}, std::pair{"logphi", phi()}, std::pair{"log10", 10.0}}) {
                try {
                    const Fit f = vcount_fit(rows, base);
                    info << "# slope_" << name << " " << format_double(f.slope) << " intercept " << format_double(f.intercept)
                         << " r2 " << format_double(f.r2) << " points " << f.n << '\n';
                } catch (const ValidationError&) {
                    info << "# slope_" << name << " unavailable (fewer than two successful grid points)\n";
                }
            }
        }
        if (failed) info << "# some rows failed (achieved_error >= epsilon)\n";
        return failed ? kExitLimit : kExitOk;
    }
};

// ---------------------------------------------------------------- count / bounds

struct CountCmd {
    std::optional<int> n;
    int max_n = 8;
    bool enumerate = false;
    std::optional<double> eps;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("count", "Adopted cc sequence counts and their closed form");
        c->add_option("--n", n, "Single length");
        c->add_option("--max-n", max_n, "Table of lengths 1..max-n (default 8)");
        c->add_flag("--enumerate", enumerate, "Also enumerate sequences (n <= 5)");
        c->add_option("--eps", eps, "Append lower-bound rows at this accuracy");
    }

    int run(const Global& g, std::ostream& out) const {
        const int lo = n ? *n : 1;
        const int hi = n ? *n : max_n;
        if (lo < 1 || hi > 40 || lo > hi) throw ValidationError("count needs 1 <= n <= 40");
        json rows = json::array();
        for (int k = lo; k <= hi; ++k) {
            const BigInt c = count_adopted(k);
            const double bound = closed_form_bound(k);
            json r;
            r["n"] = k;
            r["count_adopted"] = c.str();
            r["closed_form_bound"] = bound;
            r["rel_diff"] = std::abs(c.convert_to<double>() - bound) / bound;
            if (enumerate && k <= 5) {
                const Enumeration e = enumerate_adopted(k, g.workers);
                r["enumerated"] = e.count;
                r["distinct_products"] = e.distinct_products;
            }
            rows.push_back(r);
        }
        json bounds = json::array();
        if (eps) {
            for (const char* m : {"su2_v", "sun_v(2)", "cc_phi"}) {
                const BoundSpec spec = parse_bound_model(m);
                bounds.push_back({{"model", m}, {"epsilon", *eps}, {"vcount_lower_bound", vcount_lower_bound(spec, *eps)}});
            }
        }
        if (g.json) {
            json rep;
            rep["command"] = "count";
            rep["rows"] = rows;
            if (eps) rep["bounds"] = bounds;
            emit(out, g, rep);
            return kExitOk;
        }
        out << "n count_adopted closed_form_bound rel_diff" << (enumerate ? " enumerated distinct_products" : "") << '\n';
        for (const auto& r : rows) {
            out << r["n"].get<int>() << ' ' << r["count_adopted"].get<std::string>() << ' '
                << format_double(r["closed_form_bound"].get<double>()) << ' ' << format_double(r["rel_diff"].get<double>());
            if (r.contains("enumerated")) out << ' ' << r["enumerated"].get<std::uint64_t>() << ' ' << r["distinct_products"].get<std::uint64_t>();
            out << '\n';
        }
        for (const auto& b : bounds) {
            out << "bound " << b["model"].get<std::string>() << ' ' << format_double(b["epsilon"].get<double>()) << ' '
                << format_double(b["vcount_lower_bound"].get<double>()) << '\n';
        }
        return kExitOk;
    }
};

struct BoundsCmd {
    std::string model;
    double eps = 1e-2;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("bounds", "Average V-count lower bounds");
        c->add_option("--model", model, "su2_v, sun_v(n) or cc_phi")->required();
        c->add_option("--eps", eps, "Accuracy in (0, 1]");
    }

    int run(const Global& g, std::ostream& out) const {
        const BoundSpec spec = parse_bound_model(model);
        const double v = vcount_lower_bound(spec, eps);
        if (g.json) {
            emit(out, g, {{"command", "bounds"}, {"model", to_string(spec)}, {"epsilon", eps}, {"vcount_lower_bound", v}});
        } else {
            out << to_string(spec) << ' ' << format_double(eps) << ' ' << format_double(v) << '\n';
        }
        return kExitOk;
    }
};

// ---------------------------------------------------------------- gateset

struct GatesetCmd {
    std::string name = "v1q";
    bool dump = false;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("gateset", "Inspect or export a gate set");
        c->add_option("name", name, "v1q, v2q, v3q, cc or a gate set JSON file");
        c->add_flag("--dump", dump, "Print the gate set as JSON");
    }

    int run(const Global& g, std::ostream& out) const {
        const GateSet gs = parse_gateset_spec(name);
        if (dump) {
            out << dump_gateset(gs);
            return kExitOk;
        }
        json rep;
        rep["command"] = "gateset";
        rep["name"] = name;
        rep["dim"] = gs.dim();
        std::vector<std::string> labels, suffixes;
        for (const auto& e : gs.basis()) labels.push_back(e.label);
        for (const auto& e : gs.suffixes()) suffixes.push_back(e.label);
        rep["elements"] = labels;
        rep["suffixes"] = suffixes;
        json meta = json::object();
        for (const auto& [k, v] : gs.metadata) meta[k] = v;
        if (!meta.empty()) rep["metadata"] = meta;
        emit(out, g, rep);
        return kExitOk;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cvsynth: Clifford+V circuit synthesis"};
    app.set_version_flag("--version", "cvsynth 0.1.0");
    app.require_subcommand(1);
    Global g;
    app.add_option("--workers", g.workers, "Worker threads (0: CVSYNTH_WORKERS or hardware)");
    app.add_flag("--json", g.json, "Machine-readable report");
    app.add_flag("--deterministic", g.deterministic, "Report elapsed_s as 0");

    SynthCmd synth;
    SynthCcCmd synth_cc;
    SynthControlledCmd synth_ctl;
    BenchCmd bench;
    CountCmd count;
    BoundsCmd bounds;
    GatesetCmd gateset;
    synth.add(app);
    synth_cc.add(app);
    synth_ctl.add(app);
    bench.add(app);
    count.add(app);
    bounds.add(app);
    gateset.add(app);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
    }

    try {
        if (g.workers > 0) set_default_workers(g.workers);
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "synth") return synth.run(g, out);
        if (cmd == "synth-cc") return synth_cc.run(g, out);
        if (cmd == "synth-controlled") return synth_ctl.run(g, out);
        if (cmd == "bench") return bench.run(g, out, err);
        if (cmd == "count") return count.run(g, out);
        if (cmd == "bounds") return bounds.run(g, out);
        if (cmd == "gateset") return gateset.run(g, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

}  // namespace cvsynth::cli
