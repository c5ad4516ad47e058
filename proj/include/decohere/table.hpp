// table.hpp: Column-oriented numeric tables written as CSV.
//
// Output layout: `#`-prefixed metadata lines, one header row, then data rows.
// Every number is printed with 17 significant digits so values round-trip.

#pragma once

#include "decohere/core.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace decohere::cli {

inline constexpr const char* kVersion = "1.0.0";

class Table {
public:
    // First column; for time series the key must be strictly increasing.
    Table(std::string key_name, std::vector<double> key, bool strictly_increasing);

    static Table time_series(std::vector<double> times) { return Table("time", std::move(times), true); }

    void add(const std::string& name, std::vector<double> values);
    // Adds <name>_re and <name>_im.
    void add_complex(const std::string& name, const std::vector<cplx>& values);
    void add_metadata(const std::string& line);

    std::size_t rows() const { return columns_.front().size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<double>& column(const std::string& name) const;
    const std::vector<std::string>& metadata() const { return metadata_; }

    void write_csv(std::ostream& os) const;
    std::string to_csv() const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    std::vector<std::string> metadata_;
};

// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

}  // namespace decohere::cli
