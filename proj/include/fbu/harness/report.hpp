#ifndef FBU_HARNESS_REPORT_HPP
#define FBU_HARNESS_REPORT_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fbu {

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double rms = 0.0;  // log-space residual
};

/// Least-squares line in log-log space for y = prefactor * x^exponent.
/// Needs >= 3 points with x, y > 0; deterministic.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pts);

/// One record of a sweep; unused fields stay NaN and print as empty cells.
struct SweepPoint {
  double v0 = 0.0;
  double q0 = 0.0;
  std::map<std::string, double> values;
  bool failed = false;
  std::string error;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  std::map<std::string, double> fits;   // e.g. "q0_exponent"
  std::map<std::string, bool> flags;    // acceptance checks
  bool all_ok() const;
};

/// Deterministic CSV writer: fixed %.17g formatting, a header row, and a
/// units comment line; no timestamps so identical runs byte-reproduce.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const std::string& units_comment);
  ~CsvWriter();
  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);
  static std::string format(double v);

 private:
  struct Impl;
  Impl* impl_;
};

/// states written as JSON with a schema_version field.
void write_summary_json(const std::string& path, const std::string& run_name,
                        const std::string& mode,
                        const std::map<std::string, double>& scalars,
                        const std::map<std::string, bool>& flags);

}  // namespace fbu

#endif
