// Named end-to-end experiments. Each maps one headline property of the
// system to a deterministic run and reduces it to a uniform table of
// checked quantities; the CLI and the regression comparator both speak
// this table.
#ifndef EULAB_EXPERIMENTS_HPP
#define EULAB_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace eulab {

// One checked quantity. pass means |measured - expected| <= tolerance
// (infinities match by sign). One-sided caps on nonnegative quantities
// encode as expected = 0 with the cap in tolerance; signed "must stay
// below b" checks encode their excess max(0, value - b) the same way;
// yes/no outcomes encode as indicators with expected 1, tolerance 0.
struct ReportRow {
    std::string experiment;
    std::string quantity;
    double expected = 0.0;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

ReportRow make_row(const std::string& experiment, const std::string& quantity,
                   double expected, double measured, double tolerance);

struct ExperimentConfig {
    std::string experiment;
    std::string out_dir;         // empty: return rows only, write nothing
    std::uint64_t seed = 1;      // randomized sweeps derive from this alone
    double gamma = 0.0;          // 0: the experiment's default damping
    int grid = 0;                // 0: the experiment's default resolution
    bool stretch_example = true; // blowup: the built-in stretching profile
};

// Runners, one per experiment name. Each returns its rows; with out_dir
// set it also writes rows.csv, verdict.json, and its own time-series CSVs.
std::vector<ReportRow> run_green_table(const ExperimentConfig& cfg);
std::vector<ReportRow> run_linear_decay(const ExperimentConfig& cfg);
std::vector<ReportRow> run_optimality(const ExperimentConfig& cfg);
std::vector<ReportRow> run_nonlinear_decay(const ExperimentConfig& cfg);
std::vector<ReportRow> run_large_damping(const ExperimentConfig& cfg);
std::vector<ReportRow> run_blowup(const ExperimentConfig& cfg);
std::vector<ReportRow> run_parabolic(const ExperimentConfig& cfg);

const std::vector<std::string>& experiment_names();

// Dispatch on cfg.experiment; throws std::invalid_argument for unknown
// names or out-of-domain parameters.
std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg);

bool all_pass(const std::vector<ReportRow>& rows);

// ------------------------------------------------------------- reporting

// Header experiment,quantity,expected,measured,tolerance,pass; values in
// %.17g so equal runs produce byte-equal bodies.
void write_rows_csv(std::ostream& os, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_rows_csv(const std::string& path);

void write_verdict_json(std::ostream& os, const ExperimentConfig& cfg,
                        const std::vector<ReportRow>& rows);

// rows.csv + verdict.json under cfg.out_dir (created if absent).
void write_reports(const ExperimentConfig& cfg,
                   const std::vector<ReportRow>& rows);

// ------------------------------------------------------------ regression

struct RegressResult {
    std::vector<std::string> drifted;    // named mismatches against golden
    std::vector<std::string> ungoldened; // rows only in the report
    std::vector<std::string> missing;    // rows only in the golden table
    bool clean() const {
        return drifted.empty() && ungoldened.empty() && missing.empty();
    }
};

// Fieldwise comparison of report_dir/rows.csv against golden_dir/rows.csv.
// Measured values must agree within each golden row's own tolerance, and
// expected/pass fields must agree exactly. Throws std::runtime_error when
// either rows.csv is missing.
RegressResult regress(const std::string& report_dir,
                      const std::string& golden_dir);

} // namespace eulab

#endif
