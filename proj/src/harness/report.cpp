#include "fbu/harness/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fbu/errors.hpp"
#include "vendor_json.hpp"

namespace fbu {

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3)
    throw DomainError("fit_power_law: need at least 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    if (!(x > 0.0) || !(y > 0.0))
      throw DomainError("fit_power_law: positive data required");
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(pts.size());
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30)
    throw DomainError("fit_power_law: degenerate abscissae");
  PowerLawFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / n;
  fit.prefactor = std::exp(intercept);
  double rss = 0;
  for (const auto& [x, y] : pts) {
    const double r = std::log(y) - (intercept + fit.exponent * std::log(x));
    rss += r * r;
  }
  fit.rms = std::sqrt(rss / n);
  return fit;
}

bool SweepReport::all_ok() const {
  for (const auto& [k, v] : flags)
    if (!v) return false;
  for (const auto& p : points)
    if (p.failed) return false;
  return true;
}

struct CsvWriter::Impl {
  std::ofstream out;
};

std::string CsvWriter::format(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns,
                     const std::string& units_comment)
    : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out) throw DomainError("csv: cannot open " + path);
  for (std::size_t i = 0; i < columns.size(); ++i)
    impl_->out << (i ? "," : "") << columns[i];
  impl_->out << "\n# units: " << units_comment << "\n";
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    impl_->out << (i ? "," : "") << format(values[i]);
  impl_->out << "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    impl_->out << (i ? "," : "") << cells[i];
  impl_->out << "\n";
}

void write_summary_json(const std::string& path, const std::string& run_name,
                        const std::string& mode,
                        const std::map<std::string, double>& scalars,
                        const std::map<std::string, bool>& flags) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["run"] = run_name;
  j["mode"] = mode;
  for (const auto& [k, v] : scalars) j["values"][k] = v;
  bool ok = true;
  for (const auto& [k, v] : flags) {
    j["flags"][k] = v;
    ok = ok && v;
  }
  j["all_ok"] = ok;
  std::ofstream out(path);
  if (!out) throw DomainError("summary: cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace fbu
