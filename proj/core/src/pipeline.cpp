#include "synthbench/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "synthbench/baselines.hpp"
#include "synthbench/code_map.hpp"
#include "synthbench/demographics.hpp"
#include "synthbench/error.hpp"
#include "synthbench/fidelity.hpp"
#include "synthbench/parallel.hpp"
#include "synthbench/privacy.hpp"
#include "synthbench/rng.hpp"
#include "synthbench/utility.hpp"

namespace synthbench {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::uint64_t stage_seed(const RunConfig& cfg, std::string_view stage) {
    return Rng(cfg.seed).stream(stage).at(0);
}

Vocabulary load_vocab_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open vocabulary file: " + path.string());
    std::vector<std::string> codes;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) codes.push_back(line);
    }
    return Vocabulary(std::move(codes));
}

std::string most_prevalent_code(const PhenotypeMatrix& m) {
    const std::vector<std::uint64_t> counts = m.column_counts();
    std::size_t best = 0;
    for (std::size_t k = 1; k < counts.size(); ++k) {
        if (counts[k] > counts[best]) best = k;
    }
    return m.vocab().code(static_cast<std::uint32_t>(best));
}

json analytical_to_json(const AnalyticalResult& r) {
    json j;
    j["outcome"] = r.outcome;
    j["predictor"] = r.predictor;
    j["converged"] = r.converged;
    if (r.converged) {
        j["beta_hat"] = r.beta_hat;
        j["ci_low"] = r.ci_low;
        j["ci_high"] = r.ci_high;
    } else {
        j["failure_reason"] = r.failure_reason;
    }
    return j;
}

json predictive_to_json(const PredictiveResult& r) {
    json j;
    j["n_train"] = r.n_train;
    j["n_test"] = r.n_test;
    auto put = [&](const char* name, const std::optional<ScenarioScore>& s) {
        if (s) {
            j[std::string("auc_") + name] = s->auc;
            j[std::string("acc_") + name] = s->acc;
        }
    };
    put("trtr", r.trtr);
    put("tstr", r.tstr);
    put("tsrtr", r.tsrtr);
    if (auto d = r.delta_auc_tstr()) j["delta_auc_tstr"] = *d;
    if (auto d = r.delta_acc_tstr()) j["delta_acc_tstr"] = *d;
    if (auto d = r.delta_auc_tsrtr()) j["delta_auc_tsrtr"] = *d;
    if (auto d = r.delta_acc_tsrtr()) j["delta_acc_tsrtr"] = *d;
    if (!r.failures.empty()) {
        json f = json::object();
        for (const auto& [k, v] : r.failures) f[k] = v;
        j["failures"] = f;
    }
    return j;
}

}  // namespace

PhenotypeMatrix load_real_matrix(const RunConfig& cfg, json* ingest_info) {
    if (!cfg.real.matrix.empty()) {
        PhenotypeMatrix m = PhenotypeMatrix::load(cfg.real.matrix);
        if (ingest_info != nullptr) (*ingest_info)["source"] = "matrix";
        return m;
    }

    std::ifstream in(cfg.real.events);
    if (!in) throw DataError("cannot open events file: " + cfg.real.events.string());
    EventTable events = parse_events(in, cfg.real.schema, cfg.real.system);
    json info;
    info["source"] = "events";
    info["events_parsed"] = events.rows.size();
    info["rows_dropped_empty_code"] = events.dropped_empty_code;

    if (!cfg.real.maps.empty()) {
        std::vector<CodeMap> maps;
        for (const MapSpec& spec : cfg.real.maps) {
            maps.push_back(CodeMap::load_tsv(spec.path, spec.source, spec.target));
        }
        MapResult mapped = map_codes(events, maps);
        json stages = json::array();
        for (const MapStageReport& s : mapped.stages) {
            json stage;
            stage["source"] = to_string(s.source);
            stage["target"] = to_string(s.target);
            stage["events_in"] = s.events_in;
            stage["events_out"] = s.events_out;
            stage["events_dropped"] = s.events_dropped;
            json unmapped = json::object();
            for (const auto& [code, count] : s.unmapped) unmapped[code] = count;
            stage["unmapped"] = unmapped;
            stages.push_back(stage);
        }
        info["map_stages"] = stages;
        events = std::move(mapped.events);
    }
    if (cfg.real.truncate_parents) truncate_codes_to_parent(events);

    AggregateOptions agg;
    if (!cfg.real.fixed_vocab.empty()) {
        agg.policy = VocabPolicy::Fixed;
        agg.fixed_vocab = load_vocab_file(cfg.real.fixed_vocab);
    } else {
        agg.policy = VocabPolicy::FromData;
        agg.min_patients = cfg.real.min_patients;
    }
    PhenotypeMatrix m = aggregate(events, agg);

    if (!cfg.real.cohort_filter.empty() || !cfg.real.demographics.empty()) {
        if (cfg.real.demographics.empty()) {
            throw ConfigError("cohort_filter requires a demographics file");
        }
        std::ifstream demo_in(cfg.real.demographics);
        if (!demo_in) throw DataError("cannot open demographics file: " + cfg.real.demographics.string());
        const Demographics demo = Demographics::read_csv(demo_in);
        const CohortPredicate pred = cfg.real.cohort_filter.empty()
                                         ? CohortPredicate::all()
                                         : CohortPredicate::parse(cfg.real.cohort_filter);
        const std::size_t before = m.n_rows();
        m = filter_cohort(m, demo, pred);
        info["cohort_filter"] = pred.text();
        info["rows_before_filter"] = before;
        info["rows_after_filter"] = m.n_rows();
    }
    if (ingest_info != nullptr) *ingest_info = std::move(info);
    return m;
}

PhenotypeMatrix load_or_generate_syn(const RunConfig& cfg, const PhenotypeMatrix& real, std::uint64_t seed,
                                     double* generation_seconds) {
    if (!cfg.syn.matrix.empty()) {
        if (generation_seconds != nullptr) *generation_seconds = 0.0;
        return PhenotypeMatrix::load(cfg.syn.matrix);
    }
    const auto start = std::chrono::steady_clock::now();
    GenerationConfig gen;
    gen.target_size = cfg.syn.m;
    gen.seed = seed;
    PhenotypeMatrix syn =
        cfg.syn.method == "pbr" ? generate_pbr(real, gen) : generate_resample(real, gen);
    if (generation_seconds != nullptr) *generation_seconds = seconds_since(start);
    return syn;
}

json metric_block(const json& report) { return strip_timing(report); }

json run_pipeline(const RunConfig& cfg) {
    set_worker_budget(cfg.workers);
    std::filesystem::create_directories(cfg.out_dir);

    json report;
    json timing;
    std::string stage = "setup";
    try {
        report["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
        report["config_hash"] = cfg.hash();
        report["seed"] = cfg.seed;

        stage = "ingest";
        auto t0 = std::chrono::steady_clock::now();
        json ingest_info;
        const PhenotypeMatrix real_raw = load_real_matrix(cfg, &ingest_info);
        timing["stages"]["ingest"] = seconds_since(t0);

        stage = "generate";
        t0 = std::chrono::steady_clock::now();
        double gen_seconds = 0.0;
        const PhenotypeMatrix syn_raw =
            load_or_generate_syn(cfg, real_raw, stage_seed(cfg, "generate"), &gen_seconds);
        timing["stages"]["generate"] = seconds_since(t0);
        if (!cfg.syn.method.empty() && syn_raw.n_rows() > 0) {
            timing["generation_per_100_samples"] =
                gen_seconds * 100.0 / static_cast<double>(syn_raw.n_rows());
        }

        stage = "align";
        const VocabularyAlignment aligned = align_to_intersection(real_raw, syn_raw);
        const PhenotypeMatrix& real = aligned.real;
        const PhenotypeMatrix& syn = aligned.syn;
        report["datasets"] = {
            {"real", {{"path", cfg.real.matrix.empty() ? cfg.real.events.string() : cfg.real.matrix.string()},
                      {"n", real.n_rows()},
                      {"k", real.n_cols()},
                      {"ingest", ingest_info}}},
            {"syn", {{"path", cfg.syn.matrix.empty() ? cfg.syn.method : cfg.syn.matrix.string()},
                     {"n", syn.n_rows()},
                     {"k", syn.n_cols()}}}};
        report["vocabulary"] = {{"shared_k", real.n_cols()},
                                {"dropped_real", aligned.dropped_real},
                                {"dropped_syn", aligned.dropped_syn}};

        json metrics = json::object();
        if (cfg.fidelity_enabled) {
            stage = "fidelity";
            t0 = std::chrono::steady_clock::now();
            FidelityOptions fopts;
            fopts.folds = cfg.fidelity_folds;
            fopts.seed = stage_seed(cfg, "fidelity");
            const FidelityResult f = evaluate_fidelity(real, syn, fopts);
            json jf;
            jf["mmd"] = f.mmd;
            jf["rmspe"] = f.rmspe_reported;
            jf["mape"] = f.mape;
            jf["cfd"] = f.cfd;
            jf["cofd"] = f.cofd_reported;
            jf["disc_auc"] = f.disc_auc;
            jf["disc_acc"] = f.disc_acc;
            jf["excluded_codes"] = f.excluded_codes;
            jf["constant_columns_real"] = f.constant_columns_real;
            jf["constant_columns_syn"] = f.constant_columns_syn;
            metrics["fidelity"] = jf;
            timing["stages"]["fidelity"] = seconds_since(t0);
        }
        if (cfg.utility_enabled) {
            stage = "utility";
            t0 = std::chrono::steady_clock::now();
            json ju;
            const std::string outcome =
                cfg.utility_outcome.empty() ? most_prevalent_code(real) : cfg.utility_outcome;
            ju["outcome"] = outcome;
            PredictiveOptions popts;
            popts.seed = stage_seed(cfg, "utility");
            popts.stratified_split = cfg.utility_stratified_split;
            ju["predictive"] = predictive_to_json(predictive_utility(real, syn, outcome, popts));
            ju["predictive"]["stratified_split"] = cfg.utility_stratified_split;
            if (!cfg.analytical_tasks.empty()) {
                json tasks = json::array();
                for (const auto& [outcome_spec, predictor] : cfg.analytical_tasks) {
                    const OutcomeSpec spec = OutcomeSpec::parse(outcome_spec);
                    json t;
                    t["real"] = analytical_to_json(analytical_utility(real, spec, predictor));
                    t["syn"] = analytical_to_json(analytical_utility(syn, spec, predictor));
                    tasks.push_back(t);
                }
                ju["analytical_pairs"] = tasks;
            }
            if (cfg.utility_sweep > 0) {
                const SweepResult sweep = per_code_tstr_sweep(real, syn, 0.1, cfg.utility_sweep,
                                                              stage_seed(cfg, "sweep"), popts);
                json js;
                js["rho_vs_prevalence"] = sweep.rho_vs_prevalence;
                json rows = json::array();
                for (const SweepRow& r : sweep.rows) {
                    rows.push_back({{"code", r.code}, {"prevalence", r.prevalence}, {"auc_tstr", r.auc_tstr}});
                }
                js["rows"] = rows;
                ju["sweep"] = js;
            }
            metrics["utility"] = ju;
            timing["stages"]["utility"] = seconds_since(t0);
        }
        if (cfg.privacy_enabled) {
            stage = "privacy";
            t0 = std::chrono::steady_clock::now();
            json jp;
            MirOptions mopts;
            mopts.hist_bins = cfg.privacy_hist_bins;
            const MirResult m = mir(real, syn, mopts);
            json jm;
            jm["mean"] = m.mean;
            jm["median"] = m.median;
            jm["exact_match_fraction"] = m.exact_match_fraction;
            jm["excluded_zero_rows"] = m.excluded_zero_rows;
            jm["hist_max"] = m.hist_max;
            jm["histogram"] = m.histogram;
            json cdf = json::array();
            for (const auto& [d, q] : m.cdf) cdf.push_back({d, q});
            jm["cdf"] = cdf;
            jp["mir"] = jm;

            AirOptions aopts;
            aopts.n_balanced = cfg.privacy_n_balanced;
            aopts.n_imbalanced = cfg.privacy_n_imbalanced;
            aopts.imbalanced_rule = cfg.privacy_imbalanced_rule;
            const AirResult a = air(real, syn, aopts);
            json ja;
            ja["f1"] = a.f1_micro;
            ja["balanced_codes"] = a.balanced_codes;
            ja["imbalanced_codes"] = a.imbalanced_codes;
            ja["imbalanced_rule"] = a.imbalanced_rule;
            json per_code = json::array();
            for (const auto& [code, f1] : a.per_code_f1) per_code.push_back({code, f1});
            ja["per_code_f1"] = per_code;
            jp["air"] = ja;
            metrics["privacy"] = jp;
            timing["stages"]["privacy"] = seconds_since(t0);
        }
        report["metrics"] = metrics;
        report["directions"] = direction_tags(report);
        report["timing"] = timing;

        stage = "write";
        const ValidationResult check = validate_against_schema(report, report_schema());
        if (!check.ok) {
            std::string msg = "generated report violates schema at:";
            for (const std::string& p : check.offending_paths) msg += " " + p;
            throw DataError(msg);
        }
        if (cfg.report_format == "json" || cfg.report_format == "both") {
            write_json_atomic(cfg.out_dir / "report.json", report);
        }
        if (cfg.report_format == "csv" || cfg.report_format == "both") {
            write_csv(cfg.out_dir / "report.csv", report);
        }
        return report;
    } catch (const std::exception& e) {
        json diag;
        diag["stage"] = stage;
        diag["error"] = e.what();
        diag["partial_report"] = report;
        try {
            write_json_atomic(cfg.out_dir / "diagnostics.json", diag);
        } catch (...) {
            // diagnostics are best-effort
        }
        throw DataError("[stage " + stage + "] " + e.what());
    }
}

namespace {

struct RunningStats {
    double sum = 0, sum_sq = 0;
    int n = 0;
    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++n;
    }
    double mean() const { return n > 0 ? sum / n : 0.0; }
    double sd() const {
        if (n < 2) return 0.0;
        const double var = (sum_sq - sum * sum / n) / (n - 1);
        return var > 0 ? std::sqrt(var) : 0.0;
    }
};

}  // namespace

std::vector<ScalingPoint> run_scaling_experiment(const RunConfig& cfg, ScalingAxis axis) {
    if (cfg.syn.method.empty()) {
        throw ConfigError("scaling experiments need a built-in baseline (syn.method); "
                          "external methods supply one matrix per grid point instead");
    }
    set_worker_budget(cfg.workers);
    const PhenotypeMatrix real = load_real_matrix(cfg, nullptr);
    const std::vector<std::uint64_t>& grid =
        axis == ScalingAxis::SynthSize ? cfg.scale_m_grid : cfg.scale_n_grid;
    if (grid.empty()) throw ConfigError("scaling grid is empty");
    if (axis == ScalingAxis::TrainSize) {
        for (std::uint64_t g : grid) {
            if (g > real.n_rows()) {
                throw DataError("N-grid point " + std::to_string(g) + " exceeds real N=" +
                                std::to_string(real.n_rows()));
            }
        }
    }
    const std::string outcome =
        cfg.utility_outcome.empty() ? most_prevalent_code(real) : cfg.utility_outcome;

    std::vector<ScalingPoint> curve;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        RunningStats mmd_stats, tstr_stats, air_stats;
        for (int rep = 0; rep < cfg.scale_replicates; ++rep) {
            const std::uint64_t point_seed =
                Rng(cfg.seed).stream("scale").stream(grid[gi]).at(static_cast<std::uint64_t>(rep));
            GenerationConfig gen;
            gen.seed = point_seed;

            PhenotypeMatrix source = real;
            if (axis == ScalingAxis::TrainSize) {
                // Seeded subsample without replacement; generation trains on
                // the subsample, metrics compare against the full real data.
                std::vector<std::size_t> order(real.n_rows());
                std::iota(order.begin(), order.end(), 0);
                Rng sub_rng = Rng(point_seed).stream("subsample");
                deterministic_shuffle(order, sub_rng);
                order.resize(grid[gi]);
                std::sort(order.begin(), order.end());
                std::vector<PhenotypeMatrix::Row> rows;
                std::vector<std::string> ids;
                for (std::size_t i : order) {
                    rows.push_back(real.row(i));
                    if (!real.patient_ids().empty()) ids.push_back(real.patient_ids()[i]);
                }
                source = PhenotypeMatrix(real.vocab(), std::move(rows), std::move(ids));
                gen.target_size = cfg.syn.m;
            } else {
                gen.target_size = grid[gi];
            }
            const PhenotypeMatrix syn = cfg.syn.method == "pbr" ? generate_pbr(source, gen)
                                                                : generate_resample(source, gen);

            mmd_stats.add(mmd_max(real, syn));
            PredictiveOptions popts;
            popts.seed = Rng(point_seed).stream("tstr").at(0);
            popts.stratified_split = cfg.utility_stratified_split;
            const PredictiveResult pr = predictive_utility(real, syn, outcome, popts);
            if (pr.tstr) tstr_stats.add(pr.tstr->auc);
            AirOptions aopts;
            aopts.n_balanced = cfg.privacy_n_balanced;
            aopts.n_imbalanced = cfg.privacy_n_imbalanced;
            aopts.imbalanced_rule = cfg.privacy_imbalanced_rule;
            air_stats.add(air(real, syn, aopts).f1_micro);
        }
        ScalingPoint point;
        point.grid_value = grid[gi];
        point.replicates = cfg.scale_replicates;
        point.mmd_mean = mmd_stats.mean();
        point.mmd_sd = mmd_stats.sd();
        point.tstr_auc_mean = tstr_stats.mean();
        point.tstr_auc_sd = tstr_stats.sd();
        point.air_f1_mean = air_stats.mean();
        point.air_f1_sd = air_stats.sd();
        curve.push_back(point);
    }
    return curve;
}

void write_scaling_csv(const std::filesystem::path& path, const std::vector<ScalingPoint>& curve,
                       ScalingAxis axis) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw DataError("cannot open for writing: " + tmp.string());
        out << "axis,value,replicates,mmd_mean,mmd_sd,tstr_auc_mean,tstr_auc_sd,air_f1_mean,air_f1_sd\n";
        const char* axis_name = axis == ScalingAxis::SynthSize ? "m" : "n";
        out.precision(17);
        for (const ScalingPoint& p : curve) {
            out << axis_name << ',' << p.grid_value << ',' << p.replicates << ',' << p.mmd_mean << ','
                << p.mmd_sd << ',' << p.tstr_auc_mean << ',' << p.tstr_auc_sd << ',' << p.air_f1_mean << ','
                << p.air_f1_sd << '\n';
        }
        if (!out) throw DataError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace synthbench
