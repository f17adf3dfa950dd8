// Copyright 2026 The qbias Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// @file cli.hpp
/// The `qbias` experiment driver. Every subcommand writes CSV tables plus
/// a JSON sidecar echoing the configuration. Exit codes: 0 success,
/// 1 runtime error, 2 usage error.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbias/ansatz.hpp"
#include "qbias/boolfn.hpp"
#include "qbias/encode.hpp"
#include "qbias/error.hpp"
#include "qbias/express.hpp"
#include "qbias/gen.hpp"
#include "qbias/kernel.hpp"
#include "qbias/model.hpp"
#include "qbias/prior.hpp"
#include "qbias/stats.hpp"
#include "qbias/table.hpp"

namespace qbias::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

/// Flags shared by most subcommands.
struct Common {
    int n = 3;
    std::string encoder = "basis";
    std::string ansatz = "boolqnn";
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> encoder_seed;
    std::string out;
    std::size_t workers = 1;
    std::string range = "0,2pi";
    std::string unencodable = "fix0";

    EncodingMethod encoding() const { return parse_encoding(encoder, encoder_seed.value_or(seed)); }

    ParamRange param_range() const {
        if (range == "0,2pi") return ParamRange::full_turn();
        if (range == "0,1") return ParamRange::unit();
        throw UsageError("unknown --range '" + range + "' (expected 0,2pi|0,1)");
    }

    fs::path dir() const { return out; }

    json echo() const {
        json j;
        j["n"] = n;
        j["encoder"] = encoder;
        j["encoder_seed"] = encoder_seed.value_or(seed);
        j["ansatz"] = ansatz;
        j["seed"] = seed;
        j["range"] = range;
        j["unencodable"] = unencodable;
        j["workers"] = workers;
        j["out"] = out;
        return j;
    }
};

inline std::string default_out_dir() {
    const char *env = std::getenv("QBIAS_OUT");
    return env != nullptr && *env != '\0' ? env : ".";
}

inline void add_common(CLI::App &app, Common &c, bool seed_required) {
    app.add_option("--n", c.n, "input bits")->capture_default_str();
    app.add_option("--encoder", c.encoder, "basis|amplitude|zz|z|relu")->capture_default_str();
    app.add_option("--ansatz", c.ansatz, "boolqnn|farhi|qcnn-full|qcnn-restricted|haar")
        ->capture_default_str();
    auto *seed = app.add_option("--seed", c.seed, "master seed");
    if (seed_required) {
        seed->required();
    } else {
        seed->capture_default_str();
    }
    app.add_option("--encoder-seed", c.encoder_seed, "relu unitary seed (default: --seed)");
    c.out = default_out_dir();
    app.add_option("--out", c.out, "output directory (default $QBIAS_OUT or .)");
    app.add_option("--workers", c.workers, "worker threads")->capture_default_str();
    app.add_option("--range", c.range, "parameter range 0,2pi|0,1")->capture_default_str();
    app.add_option("--unencodable", c.unencodable,
                   "policy for inputs the encoder cannot represent: fix0|error")
        ->capture_default_str();
}

inline QnnModel make_model(const Common &c, std::ostream &err) {
    if (c.unencodable != "fix0" && c.unencodable != "error") {
        throw UsageError("unknown --unencodable '" + c.unencodable + "' (expected fix0|error)");
    }
    const auto method = c.encoding();
    const int d = data_qubits(method, c.n);
    QnnModel model(method, parse_ansatz(c.ansatz, d), c.n, &err);
    if (c.unencodable == "error" && !model.fixed_zero_inputs().empty()) {
        throw UnencodableError(std::string(token(method.kind)) + " encoding cannot represent input " +
                               input_from_index(model.fixed_zero_inputs().front(), c.n).to_string() +
                               "; rerun with --unencodable fix0 to pin its label to 0");
    }
    return model;
}

inline void common_meta(Table &t, const Common &c) {
    t.meta("n", std::to_string(c.n))
        .meta("encoder", c.encoder)
        .meta("ansatz", c.ansatz)
        .meta("seed", std::to_string(c.seed))
        .meta("range", c.range)
        .meta("version", std::string(kVersion));
    if (c.encoder == "relu") t.meta("encoder_seed", std::to_string(c.encoder_seed.value_or(c.seed)));
}

inline json sidecar(const std::string &command, json config, const std::vector<std::string> &outputs,
                    json summary) {
    json j;
    j["artifact"] = "qbias";
    j["version"] = std::string(kVersion);
    j["command"] = command;
    j["config"] = std::move(config);
    j["outputs"] = outputs;
    j["summary"] = std::move(summary);
    return j;
}

/// pf_vs_k.csv, pk.csv, rank.csv and ent_k.csv for one prior.
inline std::vector<std::string> write_prior_tables(const prior::PriorStats &s, const fs::path &dir,
                                                   const std::function<void(Table &)> &meta) {
    Table pf({"function", "K", "count", "prob"});
    meta(pf);
    for (const auto &r : prior::prob_vs_complexity(s)) {
        pf.row() << r.function.to_string() << r.complexity << r.count << r.probability;
    }
    Table pk({"K", "prob"});
    meta(pk);
    for (const auto &r : prior::prob_of_complexity(s)) pk.row() << r.complexity << r.probability;
    Table rank({"rank", "prob", "zipf"});
    meta(rank);
    for (const auto &r : prior::rank_table(s)) rank.row() << r.rank << r.probability << r.zipf;
    Table ent({"K", "entropy", "max_count"});
    meta(ent);
    for (const auto &r : prior::entropy_complexity_histogram(s)) {
        ent.row() << r.complexity << r.entropy << r.max_count;
    }
    emit_summary(pf, Format::Csv, dir / "pf_vs_k.csv");
    emit_summary(pk, Format::Csv, dir / "pk.csv");
    emit_summary(rank, Format::Csv, dir / "rank.csv");
    emit_summary(ent, Format::Csv, dir / "ent_k.csv");
    return {"pf_vs_k.csv", "pk.csv", "rank.csv", "ent_k.csv"};
}

/// Chi-square of the observed prior against uniform over all 2^(2^n)
/// functions (only when that many categories are enumerable).
inline std::optional<stats::ChiSquareResult> uniform_test(const prior::PriorStats &s) {
    if (s.n > 3) return std::nullopt;
    const std::size_t cats = std::size_t{1} << (std::size_t{1} << s.n);
    std::vector<double> counts(cats, 0.0);
    for (const auto &[f, c] : s.counts) counts[*f.to_integer()] = static_cast<double>(c);
    return stats::chi_square_uniform(counts);
}

inline json prior_summary(const prior::PriorStats &s) {
    json j;
    j["total_samples"] = s.total_samples;
    j["distinct_functions"] = s.counts.size();
    j["spearman_logp_k"] = format_double(prior::simplicity_correlation(s));
    j["fixed_zero_label"] = s.fixed_zero_label;
    if (auto chi = uniform_test(s)) {
        j["chi_square"] = format_double(chi->statistic);
        j["chi_square_p"] = format_double(chi->p_value);
    }
    return j;
}

inline void print_summary(std::ostream &out, const json &summary) {
    bool first = true;
    for (const auto &[k, v] : summary.items()) {
        out << (first ? "" : " ") << k << "=" << (v.is_string() ? v.get<std::string>() : v.dump());
        first = false;
    }
    out << "\n";
}

inline int run_args(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"qbias: inductive bias and expressivity experiments for quantum classifiers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    // prior
    Common pc;
    std::uint64_t prior_samples = 10000;
    std::string baseline = "qnn";
    int width = 64;
    auto *prior_cmd = app.add_subcommand("prior", "sample the prior over Boolean functions");
    add_common(*prior_cmd, pc, true);
    prior_cmd->add_option("--samples", prior_samples, "parameter samples")->capture_default_str();
    prior_cmd->add_option("--baseline", baseline, "qnn|mlp|random")->capture_default_str();
    prior_cmd->add_option("--width", width, "mlp hidden width")->capture_default_str();

    // kernel
    Common kc;
    std::uint64_t kernel_samples = 0;
    auto *kernel_cmd = app.add_subcommand("kernel", "fidelity kernel, spectrum and GP prior");
    add_common(*kernel_cmd, kc, false);
    kernel_cmd->add_option("--samples", kernel_samples, "GP samples (0 = matrix only)")
        ->capture_default_str();

    // gen
    Common gc;
    std::size_t repeats = 10, budget = 10000;
    std::uint64_t gen_prior_samples = 0;
    std::vector<int> target_ids;
    auto *gen_cmd = app.add_subcommand("gen", "generalisation error by rejection training");
    gc.n = 5;
    add_common(*gen_cmd, gc, true);
    gen_cmd->add_option("--repeats", repeats, "splits per target")->capture_default_str();
    gen_cmd->add_option("--budget", budget, "parameter draws per split")->capture_default_str();
    gen_cmd->add_option("--targets", target_ids, "target ids (default all)")->delimiter(',');
    gen_cmd->add_option("--prior-samples", gen_prior_samples,
                        "also estimate P(target) from this many samples")
        ->capture_default_str();

    // express
    auto *express_cmd = app.add_subcommand("express", "expressivity analysis");
    express_cmd->require_subcommand(1);
    Common cc;
    std::uint64_t witness_budget = 10000000;
    std::string checkpoint;
    bool bound_diagonal = false;
    auto *census_cmd = express_cmd->add_subcommand("census", "amplitude-encoding feasibility census");
    add_common(*census_cmd, cc, false);
    census_cmd->add_option("--witness-budget", witness_budget, "shared witness samples (0 = skip)")
        ->capture_default_str();
    census_cmd->add_option("--checkpoint", checkpoint, "resumable progress file");
    census_cmd->add_flag("--bound-diagonal", bound_diagonal, "add -1 <= H_kk <= 1");

    Common ec;
    std::uint64_t expr_budget = 10000000;
    auto *expr_cmd = express_cmd->add_subcommand("expressivity", "count witnessed functions");
    add_common(*expr_cmd, ec, true);
    expr_cmd->add_option("--budget", expr_budget, "shared sample budget")->capture_default_str();

    // twirl (also under express)
    Common tc;
    int twirl_qubits = 1, twirl_d = 3;
    std::string block_tok;
    std::uint64_t twirl_initial = 0, twirl_samples = 1000000;
    auto add_twirl = [&](CLI::App &cmd) {
        cmd.add_option("--seed", tc.seed, "master seed")->required();
        tc.out = default_out_dir();
        cmd.add_option("--out", tc.out, "output directory");
        cmd.add_option("--workers", tc.workers, "worker threads");
        cmd.add_option("--qubits", twirl_qubits, "1 (U3) or 2 (general two-qubit)");
        cmd.add_option("--block", block_tok, "u3|u2|boolqnn (overrides --qubits)");
        cmd.add_option("--d", twirl_d, "data qubits for --block boolqnn");
        cmd.add_option("--initial", twirl_initial, "initial basis state index");
        cmd.add_option("--samples", twirl_samples, "Monte Carlo samples");
    };
    auto *twirl_cmd = app.add_subcommand("twirl", "Monte Carlo twirl of a basis state");
    add_twirl(*twirl_cmd);
    auto *etwirl_cmd = express_cmd->add_subcommand("twirl", "same as the top-level twirl");
    add_twirl(*etwirl_cmd);

    // loss
    Common lc;
    int loss_target = 1;
    std::size_t iters = 1000, runs = 10;
    double threshold = 0.1;
    auto *loss_cmd = app.add_subcommand("loss", "SPSA loss curves");
    lc.n = 5;
    add_common(*loss_cmd, lc, true);
    loss_cmd->add_option("--target", loss_target, "target id")->capture_default_str();
    loss_cmd->add_option("--iters", iters, "SPSA iterations")->capture_default_str();
    loss_cmd->add_option("--runs", runs, "independent runs")->capture_default_str();
    loss_cmd->add_option("--threshold", threshold, "loss level for iterations-to-loss")
        ->capture_default_str();

    std::vector<const char *> argv;
    argv.push_back("qbias");
    for (const auto &a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion &e) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*prior_cmd) {
            const fs::path dir = pc.dir();
            prior::PriorStats s;
            if (baseline == "qnn") {
                const auto model = make_model(pc, err);
                s = prior::estimate_prior(model, prior_samples, pc.seed, pc.param_range(), pc.workers);
            } else if (baseline == "mlp") {
                s = prior::mlp_prior_baseline(pc.n, width, prior_samples, pc.seed, pc.workers);
            } else if (baseline == "random") {
                s = prior::random_learner_baseline(pc.n, prior_samples, pc.seed, pc.workers);
            } else {
                throw UsageError("unknown --baseline '" + baseline + "' (expected qnn|mlp|random)");
            }
            auto meta = [&](Table &t) {
                common_meta(t, pc);
                t.meta("samples", std::to_string(prior_samples)).meta("source", baseline);
                if (baseline == "mlp") t.meta("width", std::to_string(width));
                if (s.fixed_zero_label) t.meta("fixed_zero_label", "input 0 pinned to label 0");
            };
            auto files = write_prior_tables(s, dir, meta);
            json cfg = pc.echo();
            cfg["samples"] = prior_samples;
            cfg["baseline"] = baseline;
            cfg["width"] = width;
            const json summary = prior_summary(s);
            write_json(sidecar("prior", cfg, files, summary), dir / "prior.json");
            print_summary(out, summary);
            return 0;
        }

        if (*kernel_cmd) {
            const fs::path dir = kc.dir();
            const auto k = kernel::kernel_matrix(kc.encoding(), kc.n, kc.workers);
            const auto ev = kernel::kernel_eigenvalues(k);
            Table km({"row", "col", "value"});
            common_meta(km, kc);
            km.meta("inputs", std::to_string(k.size()));
            if (!k.fixed_zero.empty()) km.meta("dropped_inputs", "0");
            for (std::size_t r = 0; r < k.size(); ++r)
                for (std::size_t c = 0; c < k.size(); ++c)
                    km.row() << r << c
                             << k.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            Table eg({"index", "eigenvalue"});
            common_meta(eg, kc);
            for (Eigen::Index i = 0; i < ev.size(); ++i) eg.row() << i << ev(i);
            emit_summary(km, Format::Csv, dir / "kernel.csv");
            emit_summary(eg, Format::Csv, dir / "eigen.csv");
            std::vector<std::string> files = {"kernel.csv", "eigen.csv"};
            json summary;
            summary["inputs"] = k.size();
            summary["max_eigenvalue"] = format_double(ev(0));
            summary["min_eigenvalue"] = format_double(ev(ev.size() - 1));
            if (kernel_samples > 0) {
                const auto s = kernel::kernel_prior(k, kernel_samples, kc.seed, kc.workers);
                auto meta = [&](Table &t) {
                    common_meta(t, kc);
                    t.meta("samples", std::to_string(kernel_samples)).meta("source", "kernel");
                    if (s.fixed_zero_label) t.meta("fixed_zero_label", "input 0 pinned to label 0");
                };
                for (auto &f : write_prior_tables(s, dir, meta)) files.push_back(f);
                summary["distinct_functions"] = s.counts.size();
                summary["spearman_logp_k"] = format_double(prior::simplicity_correlation(s));
            }
            json cfg = kc.echo();
            cfg["samples"] = kernel_samples;
            write_json(sidecar("kernel", cfg, files, summary), dir / "kernel.json");
            print_summary(out, summary);
            return 0;
        }

        if (*gen_cmd) {
            const fs::path dir = gc.dir();
            const auto model = make_model(gc, err);
            std::vector<gen::TargetFunction> targets;
            if (target_ids.empty()) {
                targets = gen::target_suite(gc.n);
            } else {
                if (gc.n != 5) throw UnsupportedError("the target suite is defined for n = 5 only");
                for (int id : target_ids) targets.push_back(gen::find_target(id));
            }
            const auto rows = gen::generalisation_table(model, targets, repeats, budget, gc.seed,
                                                        gc.param_range(), gc.workers);
            std::optional<prior::PriorStats> pr;
            if (gen_prior_samples > 0) {
                pr = prior::estimate_prior(model, gen_prior_samples, derive_seed(gc.seed, 0xB1A5),
                                           gc.param_range(), gc.workers);
            }
            std::vector<std::string> cols = {"target_id", "K", "entropy", "mean_test_error", "std",
                                             "successes", "encoder", "ansatz", "budget", "seed"};
            if (pr) cols.push_back("prior_prob");
            Table t(cols);
            common_meta(t, gc);
            t.meta("repeats", std::to_string(repeats)).meta("budget", std::to_string(budget));
            std::vector<double> probs, errs;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto &r = rows[i];
                auto row = t.row();
                row << r.target_id << r.complexity << r.entropy << r.mean_test_error
                    << r.std_test_error << r.successes << gc.encoder << gc.ansatz << budget
                    << gc.seed;
                if (pr) {
                    const double p = pr->probability(targets[i].bits);
                    row << p;
                    if (r.successes >= 5) {
                        probs.push_back(p);
                        errs.push_back(r.mean_test_error);
                    }
                }
            }
            emit_summary(t, Format::Csv, dir / "gen_error.csv");
            json cfg = gc.echo();
            cfg["repeats"] = repeats;
            cfg["budget"] = budget;
            cfg["targets"] = target_ids;
            cfg["prior_samples"] = gen_prior_samples;
            json summary;
            std::size_t succ = 0;
            for (const auto &r : rows) succ += r.successes;
            summary["successes"] = succ;
            if (pr) summary["spearman_prior_error"] = format_double(stats::spearman(probs, errs));
            write_json(sidecar("gen", cfg, {"gen_error.csv"}, summary), dir / "gen.json");
            print_summary(out, summary);
            return 0;
        }

        if (*census_cmd) {
            const fs::path dir = cc.dir();
            express::CensusOptions opt;
            opt.workers = cc.workers;
            opt.bound_diagonal = bound_diagonal;
            if (!checkpoint.empty()) opt.checkpoint = checkpoint;
            const auto census = express::amplitude_expressivity_census(cc.n, opt);
            std::vector<BooleanFunction> feasible;
            for (const auto &e : census.entries) {
                if (e.status == express::FeasibilityVerdict::Status::FeasibleRelaxation) {
                    feasible.push_back(express::unrestrict_labels(e.function));
                }
            }
            std::optional<express::WitnessRun> wr;
            if (witness_budget > 0) {
                const QnnModel model(EncodingMethod::amplitude(),
                                     AnsatzSpec::haar(data_qubits(EncodingMethod::amplitude(), cc.n)),
                                     cc.n, &err);
                wr = express::witness_run(model, feasible, witness_budget, cc.seed, cc.workers);
            }
            Table t({"function", "status", "witnessed"});
            t.meta("n", std::to_string(cc.n))
                .meta("seed", std::to_string(cc.seed))
                .meta("witness_budget", std::to_string(witness_budget))
                .meta("witness_ansatz", "haar")
                .meta("bound_diagonal", bound_diagonal ? "1" : "0")
                .meta("version", std::string(kVersion));
            std::size_t fi = 0;
            for (const auto &e : census.entries) {
                std::string w = "no";
                if (e.status == express::FeasibilityVerdict::Status::FeasibleRelaxation) {
                    w = !wr ? "skipped" : (wr->first_hit[fi] ? "yes" : "no");
                    ++fi;
                }
                t.row() << e.function << express::status_token(e.status) << w;
            }
            emit_summary(t, Format::Csv, dir / "census.csv");
            json cfg = cc.echo();
            cfg["witness_budget"] = witness_budget;
            cfg["checkpoint"] = checkpoint;
            cfg["bound_diagonal"] = bound_diagonal;
            json summary;
            summary["feasible"] = census.feasible_count;
            summary["infeasible"] = census.infeasible.size();
            if (wr) {
                summary["witnessed"] = wr->found;
                summary["witness_samples"] = wr->samples_used;
            }
            write_json(sidecar("express census", cfg, {"census.csv"}, summary), dir / "census.json");
            out << "feasible=" << census.feasible_count
                << " infeasible=" << census.infeasible.size() << "\n";
            if (wr) out << "witnessed=" << wr->found << " witness_samples=" << wr->samples_used << "\n";
            if (census.infeasible.size() <= 16) {
                for (const auto &f : census.infeasible) out << "infeasible " << f << "\n";
            }
            return 0;
        }

        if (*expr_cmd) {
            const fs::path dir = ec.dir();
            const auto model = make_model(ec, err);
            if (ec.n > 4) throw SizeError("expressivity: n must be <= 4");
            const std::size_t len = std::size_t{1} << ec.n;
            std::vector<BooleanFunction> wanted;
            for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
                BooleanFunction f(len);
                for (std::size_t i = 0; i < len; ++i) f.set(i, (v >> (len - 1 - i)) & 1U);
                bool ok = true;
                for (auto z : model.fixed_zero_inputs()) ok = ok && !f[z];
                if (ok) wanted.push_back(f);
            }
            const auto wr = express::witness_run(model, wanted, expr_budget, ec.seed, ec.workers,
                                                 ec.param_range());
            Table t({"encoder", "ansatz", "n", "witnessed", "possible", "samples_used"});
            common_meta(t, ec);
            t.meta("budget", std::to_string(expr_budget));
            t.row() << ec.encoder << ec.ansatz << ec.n << wr.found << wanted.size() << wr.samples_used;
            emit_summary(t, Format::Csv, dir / "expressivity.csv");
            std::vector<std::string> files = {"expressivity.csv"};
            if (wr.found < wanted.size()) {
                Table miss({"function"});
                common_meta(miss, ec);
                for (std::size_t i = 0; i < wanted.size(); ++i) {
                    if (!wr.first_hit[i]) miss.row() << wanted[i].to_string();
                }
                emit_summary(miss, Format::Csv, dir / "unwitnessed.csv");
                files.push_back("unwitnessed.csv");
            }
            json cfg = ec.echo();
            cfg["budget"] = expr_budget;
            json summary;
            summary["witnessed"] = wr.found;
            summary["possible"] = wanted.size();
            summary["samples_used"] = wr.samples_used;
            write_json(sidecar("express expressivity", cfg, files, summary),
                       dir / "expressivity.json");
            print_summary(out, summary);
            return 0;
        }

        if (*twirl_cmd || *etwirl_cmd) {
            const fs::path dir = tc.dir();
            express::TwirlBlock block;
            std::string name = block_tok;
            if (name.empty()) {
                if (twirl_qubits == 1) {
                    name = "u3";
                } else if (twirl_qubits == 2) {
                    name = "u2";
                } else {
                    throw UsageError("--qubits must be 1 or 2 (use --block boolqnn for larger)");
                }
            }
            if (name == "u3") {
                block = express::TwirlBlock::u3();
            } else if (name == "u2") {
                block = express::TwirlBlock::general_two_qubit();
            } else if (name == "boolqnn") {
                block = express::TwirlBlock::boolean_qnn(twirl_d);
            } else {
                throw UsageError("unknown --block '" + name + "' (expected u3|u2|boolqnn)");
            }
            const auto rep =
                express::twirl_check(block, twirl_initial, twirl_samples, tc.seed, tc.workers);
            Table t({"qubits", "samples", "max_deviation"});
            t.meta("block", name)
                .meta("initial", std::to_string(twirl_initial))
                .meta("seed", std::to_string(tc.seed))
                .meta("compared", rep.readout_marginal ? "readout marginal vs I/2" : "full state vs I/2^q")
                .meta("version", std::string(kVersion));
            t.row() << rep.qubits << rep.samples << rep.max_abs_deviation;
            emit_summary(t, Format::Csv, dir / "twirl.csv");
            json cfg;
            cfg["block"] = name;
            cfg["d"] = twirl_d;
            cfg["initial"] = twirl_initial;
            cfg["samples"] = twirl_samples;
            cfg["seed"] = tc.seed;
            cfg["workers"] = tc.workers;
            cfg["out"] = tc.out;
            json summary;
            summary["qubits"] = rep.qubits;
            summary["max_deviation"] = format_double(rep.max_abs_deviation);
            summary["readout_marginal"] = rep.readout_marginal;
            write_json(sidecar("twirl", cfg, {"twirl.csv"}, summary), dir / "twirl.json");
            print_summary(out, summary);
            return 0;
        }

        if (*loss_cmd) {
            const fs::path dir = lc.dir();
            const auto model = make_model(lc, err);
            if (lc.n != 5) throw UnsupportedError("loss: the target suite is defined for n = 5 only");
            const auto target = gen::find_target(loss_target);
            const SpsaConfig cfg_spsa;
            Table t({"run", "iter", "loss", "train_error", "encoder", "init_range"});
            common_meta(t, lc);
            t.meta("target", std::to_string(loss_target))
                .meta("iters", std::to_string(iters))
                .meta("spsa", "a=calibrated(target 2pi/10, 25 steps) c=0.2 alpha=0.602 gamma=0.101 A=0")
                .meta("loss", "mean of 1 - l*<Z>, l=+1 for label 0 and -1 for label 1");
            std::vector<double> hits;
            for (std::size_t r = 0; r < runs; ++r) {
                const auto split = gen::make_split(lc.n, derive_seed(lc.seed, 2 * r));
                const auto run = gen::spsa_train(model, target.bits, split, iters,
                                                 derive_seed(lc.seed, 2 * r + 1), lc.param_range(),
                                                 cfg_spsa);
                for (const auto &p : run.curve) {
                    t.row() << r << p.iter << p.loss << p.train_error << lc.encoder << lc.range;
                }
                hits.push_back(static_cast<double>(gen::iterations_to_loss(run.curve, threshold)));
            }
            emit_summary(t, Format::Csv, dir / "loss_curve.csv");
            json cfg = lc.echo();
            cfg["target"] = loss_target;
            cfg["iters"] = iters;
            cfg["runs"] = runs;
            cfg["threshold"] = threshold;
            json summary;
            summary["median_iterations_to_loss"] = format_double(stats::median(hits));
            write_json(sidecar("loss", cfg, {"loss_curve.csv"}, summary), dir / "loss.json");
            print_summary(out, summary);
            return 0;
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << app.help();
    return 2;
}

inline int run(int argc, char **argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_args(args, out, err);
}

} // namespace qbias::cli
