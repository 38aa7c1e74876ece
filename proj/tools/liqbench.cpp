// liqbench: command-line driver for the intraday liquidity pipeline.
//
// Subcommands: bin, clean, profile, fit, granger, correlations, synth, report.
// Exit codes: 0 success, 1 input/validation failure, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "liq/binning.hpp"
#include "liq/causality.hpp"
#include "liq/cleaning.hpp"
#include "liq/csv.hpp"
#include "liq/errors.hpp"
#include "liq/ingest.hpp"
#include "liq/linmodels.hpp"
#include "liq/market.hpp"
#include "liq/report.hpp"
#include "liq/selection.hpp"
#include "liq/stationarize.hpp"
#include "liq/synth.hpp"
#include "liq/types.hpp"

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw liq::ConfigError("cannot open input file '" + path + "'");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw liq::ConfigError("cannot open output file '" + path + "'");
    return out;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw liq::ConfigError("cannot create directory '" + dir + "': " + ec.message());
}

// Flags shared across subcommands. Strings are converted (and validated) at
// run time so a bad value exits 1 like any other input problem.
struct GlobalOpts {
    uint64_t seed = 0;
    std::string market;  // empty: infer from data / synth spec
    std::string mode = "pre-trade";
    int jobs = 1;
};

std::optional<liq::MarketConfig> market_of(const GlobalOpts& g) {
    if (g.market.empty()) return std::nullopt;
    return liq::MarketConfig::preset(g.market);
}

liq::BinPanel load_panel(const std::string& path, const GlobalOpts& g,
                         std::optional<double> tick_size = std::nullopt,
                         std::string stock_id = {}) {
    auto in = open_input(path);
    return liq::read_bins_csv(in, market_of(g), tick_size, std::move(stock_id), path);
}

std::vector<liq::Date> parse_date_list(const std::string& csv_list) {
    std::vector<liq::Date> days;
    std::stringstream ss(csv_list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) days.push_back(liq::date_from_iso(item));
    return days;
}

// Full-sample deseasonalization of all four variables.
liq::SeriesSet deseasonalized(const liq::BinPanel& panel) {
    liq::SeriesSet series;
    for (liq::Var v : liq::kAllVars) {
        liq::SeasonalProfile profile = liq::seasonal_profile(panel, v);
        series[static_cast<size_t>(static_cast<int>(v))] = liq::deseasonalize(panel, v, profile);
    }
    return series;
}

std::vector<liq::Var> targets_from_flag(const std::string& target) {
    if (target == "all") return {liq::kAllVars.begin(), liq::kAllVars.end()};
    return {liq::var_from_name(target)};
}

// The best target-only row of a score table (the empty baseline competes).
std::optional<liq::SpecScore> best_ar_of(const liq::CVResult& result) {
    liq::VarSet ar_subset = liq::set_with(0, result.target);
    std::optional<liq::SpecScore> best;
    for (const auto& row : result.table) {
        if (row.subset != 0 && row.subset != ar_subset) continue;
        if (!std::isfinite(row.mean_r2)) continue;
        // Rows arrive baseline-first then lags ascending, matching the
        // lag-then-size tie-break, so strict improvement keeps the right row.
        if (!best || row.mean_r2 > best->mean_r2) best = row;
    }
    return best;
}

std::optional<liq::SpecScore> best_overall_of(const liq::CVResult& result) {
    if (!result.best) return std::nullopt;
    for (const auto& row : result.table)
        if (row.subset == result.best->subset && row.lag == result.best->lag) return row;
    return std::nullopt;
}

int run_bin(const GlobalOpts& g, const std::string& trades_path, const std::string& quotes_path,
            const std::string& ticks_path, const std::string& out_path, double tick_size,
            const std::string& stock_id) {
    liq::SpreadMode mode = liq::spread_mode_from_name(g.mode);
    liq::MarketConfig market = liq::MarketConfig::preset(g.market.empty() ? "US" : g.market);
    std::vector<liq::EnrichedTrade> ticks;
    std::vector<liq::QuoteEvent> quotes;
    bool have_quotes = false;
    if (!ticks_path.empty()) {
        if (!trades_path.empty() || !quotes_path.empty())
            throw liq::ConfigError("pass either --ticks or --trades/--quotes, not both");
        auto in = open_input(ticks_path);
        ticks = liq::parse_enriched(in, ticks_path);
    } else {
        if (trades_path.empty() || quotes_path.empty())
            throw liq::ConfigError("bin needs --ticks, or --trades and --quotes");
        auto tin = open_input(trades_path);
        auto trades = liq::parse_trades(tin, trades_path);
        auto qin = open_input(quotes_path);
        quotes = liq::parse_quotes(qin, quotes_path);
        have_quotes = true;
        size_t n_dropped = 0;
        ticks = liq::attach_prevailing_quote(trades, quotes, &n_dropped);
        if (n_dropped > 0)
            std::cerr << "bin: dropped " << n_dropped << " trade(s) before the first quote\n";
    }
    liq::BinPanel panel = liq::build_bins(ticks, market, tick_size, mode,
                                          have_quotes ? &quotes : nullptr, stock_id);
    auto out = open_output(out_path);
    liq::write_bins_csv(out, panel);
    return 0;
}

int run_clean(const GlobalOpts& g, const std::string& bins_path, const std::string& out_path,
              const std::string& report_path, double threshold, double epsilon,
              const std::string& exclude_days) {
    liq::BinPanel panel = load_panel(bins_path, g);
    liq::CleaningReport report;
    liq::BinPanel cleaned =
        liq::clean_panel(panel, threshold, epsilon, parse_date_list(exclude_days), &report);
    auto out = open_output(out_path);
    liq::write_bins_csv(out, cleaned);
    if (!report_path.empty()) {
        auto rep = open_output(report_path);
        liq::write_cleaning_report(rep, report);
    }
    std::cerr << "clean: removed " << report.removed_days.size() << " day(s), substituted in "
              << report.substitutions.size() << " day(s)\n";
    return 0;
}

int run_profile(const GlobalOpts& g, const std::string& bins_path, const std::string& out_dir,
                const std::string& target, bool write_series) {
    liq::BinPanel panel = load_panel(bins_path, g);
    ensure_dir(out_dir);
    for (liq::Var v : targets_from_flag(target)) {
        liq::SeasonalProfile profile = liq::seasonal_profile(panel, v);
        auto out = open_output(out_dir + "/profile_" + std::string(liq::var_name(v)) + ".csv");
        liq::write_profile_csv(out, profile);
        if (write_series) {
            liq::PanelSeries series = liq::deseasonalize(panel, v, profile);
            auto sout =
                open_output(out_dir + "/series_" + std::string(liq::var_name(v)) + ".csv");
            liq::write_series_csv(sout, series);
        }
    }
    return 0;
}

int run_fit(const GlobalOpts& g, const std::string& bins_path, const std::string& out_dir,
            const std::string& target, int max_lag, bool ar_only,
            const std::string& profile_mode_name, int n_batches, int train_days, int valid_days,
            std::string zone, const std::string& stock_id) {
    liq::BinPanel panel = load_panel(bins_path, g, std::nullopt, stock_id);
    liq::ProfileMode profile_mode = liq::profile_mode_from_name(profile_mode_name);
    liq::SubsetPolicy policy = ar_only ? liq::SubsetPolicy::ArOnly : liq::SubsetPolicy::All;
    liq::BatchScheme scheme =
        liq::make_batches(panel.n_days(), n_batches, train_days, valid_days);
    liq::SegmentLayout layout = liq::layout_for_market(panel.market);
    ensure_dir(out_dir);

    liq::StockRecord record;
    record.stock_id = panel.stock_id.empty() ? "STOCK" : panel.stock_id;
    record.zone = zone.empty() ? panel.market.zone : zone;
    record.descriptive = liq::descriptive_stats(panel);

    liq::SeriesSet series = deseasonalized(panel);
    auto models_out = open_output(out_dir + "/models.jsonl");
    for (liq::Var v : targets_from_flag(target)) {
        size_t idx = static_cast<size_t>(static_cast<int>(v));
        liq::CVResult result =
            liq::grid_search(panel, v, max_lag, policy, scheme, profile_mode, layout, g.jobs);
        auto scores = open_output(out_dir + "/scores_" + std::string(liq::var_name(v)) + ".csv");
        liq::write_scores_csv(scores, result);
        record.best_ar[idx] = best_ar_of(result);
        if (!ar_only) record.best_var[idx] = best_overall_of(result);

        // Full-sample refits of the winners, for reporting and the record.
        std::optional<liq::SpecScore> winners[2] = {record.best_ar[idx], record.best_var[idx]};
        for (int w = 0; w < 2; ++w) {
            if (!winners[w]) continue;
            if (w == 1 && record.best_ar[idx] &&
                winners[1]->subset == winners[0]->subset && winners[1]->lag == winners[0]->lag)
                continue;  // same spec, one record is enough
            liq::ModelSpec spec{v, winners[w]->subset, winners[w]->lag};
            if (spec.subset == 0) continue;  // intercept-only baseline: nothing to record
            liq::FittedModel model =
                liq::fit_linear(series, spec, 0, panel.n_days(), layout);
            liq::write_model_record(models_out, model);
            if (w == 0) record.ar_coef[idx] = model.coef;
        }
        std::cerr << "fit: " << liq::var_name(v) << " best ";
        if (result.best)
            std::cerr << "subset=" << liq::set_label(result.best->subset)
                      << " lag=" << result.best->lag << " mean_r2=" << result.best_mean_r2
                      << "\n";
        else
            std::cerr << "(none)\n";
    }
    auto rec_out = open_output(out_dir + "/record.json");
    liq::write_stock_record(rec_out, record);
    return 0;
}

int run_granger(const GlobalOpts& g, const std::string& bins_path, const std::string& out_path,
                int max_lag, double alpha, const std::string& mode_name) {
    liq::BinPanel panel = load_panel(bins_path, g);
    liq::GrangerMode mode = liq::granger_mode_from_name(mode_name);
    liq::SegmentLayout layout = liq::layout_for_market(panel.market);
    liq::SeriesSet series = deseasonalized(panel);
    std::vector<liq::GrangerResult> results =
        liq::granger_grid(series, max_lag, alpha, mode, layout, g.jobs);
    auto out = open_output(out_path);
    liq::write_granger_csv(out, results);
    return 0;
}

int run_correlations(const GlobalOpts& g, const std::string& bins_path,
                     const std::string& out_path, int max_lag) {
    liq::BinPanel panel = load_panel(bins_path, g);
    liq::SegmentLayout layout = liq::layout_for_market(panel.market);
    liq::SeriesSet series = deseasonalized(panel);
    liq::LaggedCorrelationTable table = liq::lagged_correlations(series, max_lag, layout);
    auto out = open_output(out_path);
    liq::write_correlations_csv(out, table);
    return 0;
}

int run_synth(const GlobalOpts& g, bool seed_given, const std::string& spec_path,
              const std::string& out_path, const std::string& truth_path, size_t days_override,
              const std::string& stock_id, const std::string& gbm_out, double sigma2,
              int trades_per_bin, double start_price, double quote_spread) {
    liq::SynthSpec spec;
    if (!spec_path.empty()) {
        auto in = open_input(spec_path);
        spec = liq::parse_synth_spec(in, spec_path);
    }
    if (seed_given) spec.seed = g.seed;
    if (!g.market.empty()) spec.market = liq::MarketConfig::preset(g.market);
    if (days_override > 0) spec.n_days = days_override;
    if (!stock_id.empty()) spec.stock_id = stock_id;
    spec.validate();

    if (!gbm_out.empty()) {
        std::vector<liq::EnrichedTrade> ticks = liq::simulate_gbm_ticks(
            sigma2, trades_per_bin, spec.n_days, spec.market, spec.seed, start_price,
            quote_spread, liq::kSynthFirstDay);
        auto out = open_output(gbm_out);
        liq::write_enriched(out, ticks);
    }
    if (!out_path.empty()) {
        liq::BinPanel panel = liq::synthesize_panel(spec);
        auto out = open_output(out_path);
        liq::write_bins_csv(out, panel);
    }
    if (!truth_path.empty()) {
        auto out = open_output(truth_path);
        liq::write_synth_spec(out, spec);
    }
    if (out_path.empty() && gbm_out.empty() && truth_path.empty())
        throw liq::ConfigError("synth: nothing to do (pass --out, --gbm-out, or --truth)");
    return 0;
}

int run_report(const std::vector<std::string>& record_paths, const std::string& records_dir,
               const std::string& metadata_path, const std::string& bins_path,
               const std::string& out_dir, const GlobalOpts& g) {
    std::vector<std::string> paths = record_paths;
    if (!records_dir.empty()) {
        std::vector<std::string> found;
        for (const auto& entry : fs::directory_iterator(records_dir))
            if (entry.path().extension() == ".json") found.push_back(entry.path().string());
        std::sort(found.begin(), found.end());
        paths.insert(paths.end(), found.begin(), found.end());
    }
    if (paths.empty()) throw liq::ConfigError("report: no stock records given");
    std::vector<liq::StockRecord> records;
    for (const auto& p : paths) {
        auto in = open_input(p);
        records.push_back(liq::read_stock_record(in, p));
    }
    std::vector<liq::StockMeta> metadata;
    if (!metadata_path.empty()) {
        auto in = open_input(metadata_path);
        metadata = liq::read_metadata_csv(in, metadata_path);
    }
    liq::SummaryReport report = liq::summarize(records, metadata);
    for (const auto& w : report.warnings) std::cerr << "report: warning: " << w << "\n";
    ensure_dir(out_dir);
    {
        auto out = open_output(out_dir + "/stock_summaries.csv");
        liq::write_stock_summaries_csv(out, report);
    }
    {
        auto out = open_output(out_dir + "/table2.csv");
        liq::write_table2_csv(out, report);
    }
    {
        auto out = open_output(out_dir + "/table3.csv");
        liq::write_table3_csv(out, report);
    }
    {
        auto out = open_output(out_dir + "/scatter_spread_r2.csv");
        liq::write_scatter_spread_r2_csv(out, report);
    }
    {
        auto out = open_output(out_dir + "/r2_improvement.csv");
        liq::write_r2_improvement_csv(out, report);
    }
    {
        std::ostringstream buf;
        if (liq::write_scatter_cap_first_coef_csv(buf, report))
            open_output(out_dir + "/scatter_cap_first_coef.csv") << buf.str();
    }
    {
        std::ostringstream buf;
        if (liq::write_scatter_cap_lambda_csv(buf, report))
            open_output(out_dir + "/scatter_cap_lambda.csv") << buf.str();
    }
    if (!bins_path.empty()) {
        liq::BinPanel panel = load_panel(bins_path, g);
        std::vector<liq::QuantileCurves> curves;
        for (liq::Var v : liq::kAllVars)
            curves.push_back(liq::intraday_quantile_curves(panel, v));
        auto out = open_output(out_dir + "/quantile_curves.csv");
        liq::write_quantile_curves_csv(out, curves);
    }
    {
        nlohmann::json meta = {
            {"lambda_definition",
             "least-squares slope of -log|a_i| against the lag index i, over lags with "
             "|a_i| > 1e-6; larger lambda means shorter memory"},
            {"tick_classification",
             "large if average spread in ticks <= 1.3, small if >= 2, medium between"}};
        open_output(out_dir + "/report_meta.json") << meta.dump(2) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"intraday liquidity dynamics: binning, cleaning, seasonal profiles, "
                 "model selection, causality, synthesis, and cross-sectional reports"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "Generator seed (synth)")->capture_default_str();
    auto* seed_opt = app.get_option("--seed");
    app.add_option("--market", g.market, "Market preset: US, UK, Japan, HongKong");
    app.add_option("--mode", g.mode, "Spread sampling: pre-trade or bin-start")
        ->capture_default_str();
    app.add_option("--jobs", g.jobs, "Worker threads for grids")->capture_default_str();
    app.set_config("--config", "", "TOML-style config file; command-line flags override it");

    // bin
    auto* bin_cmd = app.add_subcommand("bin", "Aggregate ticks into 5-minute bins");
    std::string trades_path, quotes_path, ticks_path, bin_out, stock_id = "STOCK";
    double tick_size = 0.01;
    bin_cmd->add_option("--trades", trades_path, "Trades CSV (timestamp_ns,price,quantity)");
    bin_cmd->add_option("--quotes", quotes_path,
                        "Quotes CSV (timestamp_ns,bid,ask,bid_size,ask_size)");
    bin_cmd->add_option("--ticks", ticks_path, "Combined trades+prevailing-quotes CSV");
    bin_cmd->add_option("--out", bin_out, "Output bins CSV")->required();
    bin_cmd->add_option("--tick-size", tick_size, "Price tick size")->capture_default_str();
    bin_cmd->add_option("--stock-id", stock_id, "Stock identifier")->capture_default_str();

    // clean
    auto* clean_cmd = app.add_subcommand("clean", "Filter incomplete days, patch zero volatility");
    std::string clean_bins, clean_out, clean_report, exclude_days;
    double threshold = 0.8, epsilon = 1e-6;
    clean_cmd->add_option("--bins", clean_bins, "Input bins CSV")->required();
    clean_cmd->add_option("--out", clean_out, "Output bins CSV")->required();
    clean_cmd->add_option("--report", clean_report, "Cleaning report JSONL");
    clean_cmd->add_option("--threshold", threshold, "Minimum fraction of non-empty bins per day")
        ->capture_default_str();
    clean_cmd->add_option("--epsilon", epsilon, "Volatility floor for substitution")
        ->capture_default_str();
    clean_cmd->add_option("--exclude-days", exclude_days,
                          "Comma-separated ISO dates to drop (half-day calendar)");

    // profile
    auto* profile_cmd =
        app.add_subcommand("profile", "Seasonal profiles (and deseasonalized series)");
    std::string prof_bins, prof_dir, prof_target = "all";
    bool prof_series = false;
    profile_cmd->add_option("--bins", prof_bins, "Input bins CSV")->required();
    profile_cmd->add_option("--out-dir", prof_dir, "Output directory")->required();
    profile_cmd->add_option("--variable", prof_target, "Variable name or 'all'")
        ->capture_default_str();
    profile_cmd->add_flag("--series", prof_series, "Also write deseasonalized series CSVs");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Cross-validated lag/subset selection");
    std::string fit_bins, fit_dir, fit_target = "all", fit_profile_mode = "train-only", fit_zone;
    int max_lag = 40, n_batches = 20, train_days = 150, valid_days = 150;
    bool ar_only = false;
    fit_cmd->add_option("--bins", fit_bins, "Input (cleaned) bins CSV")->required();
    fit_cmd->add_option("--out-dir", fit_dir, "Output directory")->required();
    fit_cmd->add_option("--target", fit_target, "Target variable or 'all'")
        ->capture_default_str();
    fit_cmd->add_option("--max-lag", max_lag, "Largest lag searched")->capture_default_str();
    fit_cmd->add_flag("--ar-only", ar_only, "Search only the target-only subset");
    fit_cmd->add_option("--profile-mode", fit_profile_mode,
                        "Deseasonalization inside batches: train-only or full-sample")
        ->capture_default_str();
    fit_cmd->add_option("--n-batches", n_batches, "Walk-forward batches")->capture_default_str();
    fit_cmd->add_option("--train-days", train_days, "Training days per batch")
        ->capture_default_str();
    fit_cmd->add_option("--valid-days", valid_days, "Validation days per batch")
        ->capture_default_str();
    fit_cmd->add_option("--zone", fit_zone, "Zone label for the stock record");
    std::string fit_stock_id;
    fit_cmd->add_option("--stock-id", fit_stock_id, "Stock identifier for the record");

    // granger
    auto* granger_cmd = app.add_subcommand("granger", "Pairwise Granger causality tests");
    std::string gr_bins, gr_out, gr_mode = "joint";
    int gr_max_lag = 10;
    double alpha = 0.001;
    granger_cmd->add_option("--bins", gr_bins, "Input (cleaned) bins CSV")->required();
    granger_cmd->add_option("--out", gr_out, "Output CSV")->required();
    granger_cmd->add_option("--max-lag", gr_max_lag, "Largest lag tested")->capture_default_str();
    granger_cmd->add_option("--alpha", alpha, "Rejection level")->capture_default_str();
    granger_cmd->add_option("--granger-mode", gr_mode, "joint or single-lag")
        ->capture_default_str();

    // correlations
    auto* corr_cmd = app.add_subcommand("correlations", "Lagged cross-correlations");
    std::string corr_bins, corr_out;
    int corr_max_lag = 9;
    corr_cmd->add_option("--bins", corr_bins, "Input (cleaned) bins CSV")->required();
    corr_cmd->add_option("--out", corr_out, "Output CSV")->required();
    corr_cmd->add_option("--max-lag", corr_max_lag, "Largest lag")->capture_default_str();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Synthetic panels and tick streams");
    std::string synth_spec_path, synth_out, synth_truth, synth_stock, gbm_out;
    size_t synth_days = 0;
    double sigma2 = 1e-4, start_price = 100.0, quote_spread = 0.02;
    int trades_per_bin = 100;
    synth_cmd->add_option("--spec", synth_spec_path, "Synthesis spec (JSON)");
    synth_cmd->add_option("--out", synth_out, "Output bins CSV (panel mode)");
    synth_cmd->add_option("--truth", synth_truth, "Resolved ground-truth spec (JSON)");
    synth_cmd->add_option("--days", synth_days, "Override the spec's day count");
    synth_cmd->add_option("--stock-id", synth_stock, "Override the spec's stock id");
    synth_cmd->add_option("--gbm-out", gbm_out, "Output ticks CSV (price-path mode)");
    synth_cmd->add_option("--sigma2", sigma2, "Per-bin variance of the price path")
        ->capture_default_str();
    synth_cmd->add_option("--trades-per-bin", trades_per_bin, "Trades per bin (>= 4)")
        ->capture_default_str();
    synth_cmd->add_option("--start-price", start_price, "Initial price")->capture_default_str();
    synth_cmd->add_option("--quote-spread", quote_spread, "Fixed quoted spread")
        ->capture_default_str();

    // report
    auto* report_cmd = app.add_subcommand("report", "Cross-sectional tables and figure data");
    std::vector<std::string> record_paths;
    std::string records_dir, metadata_path, report_bins, report_dir;
    report_cmd->add_option("--records", record_paths, "Stock record JSON files");
    report_cmd->add_option("--records-dir", records_dir, "Directory of stock record JSONs");
    report_cmd->add_option("--metadata", metadata_path,
                           "Metadata CSV (stock_id,zone,market_cap,free_float)");
    report_cmd->add_option("--bins", report_bins, "Bins CSV for intraday quantile curves");
    report_cmd->add_option("--out-dir", report_dir, "Output directory")->required();

    // Global flags may follow the subcommand: unmatched options bubble up.
    for (CLI::App* sc : app.get_subcommands(nullptr)) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        CLI::App* active = &app;
        while (!active->get_subcommands().empty()) active = active->get_subcommands().front();
        std::cerr << active->help();
        return 2;
    }

    try {
        if (bin_cmd->parsed())
            return run_bin(g, trades_path, quotes_path, ticks_path, bin_out, tick_size,
                           stock_id);
        if (clean_cmd->parsed())
            return run_clean(g, clean_bins, clean_out, clean_report, threshold, epsilon,
                             exclude_days);
        if (profile_cmd->parsed())
            return run_profile(g, prof_bins, prof_dir, prof_target, prof_series);
        if (fit_cmd->parsed())
            return run_fit(g, fit_bins, fit_dir, fit_target, max_lag, ar_only, fit_profile_mode,
                           n_batches, train_days, valid_days, fit_zone, fit_stock_id);
        if (granger_cmd->parsed())
            return run_granger(g, gr_bins, gr_out, gr_max_lag, alpha, gr_mode);
        if (corr_cmd->parsed()) return run_correlations(g, corr_bins, corr_out, corr_max_lag);
        if (synth_cmd->parsed())
            return run_synth(g, seed_opt->count() > 0, synth_spec_path, synth_out, synth_truth,
                             synth_days, synth_stock, gbm_out, sigma2, trades_per_bin,
                             start_price, quote_spread);
        if (report_cmd->parsed())
            return run_report(record_paths, records_dir, metadata_path, report_bins, report_dir,
                              g);
    } catch (const liq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;  // unreachable: require_subcommand guarantees one branch ran
}
