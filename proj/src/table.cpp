#include "decohere/table.hpp"

#include "decohere/errors.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace decohere::cli {

std::string format_number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Table::Table(std::string key_name, std::vector<double> key, bool strictly_increasing) {
    if (key.empty()) {
        throw ValidationError("table: key column '" + key_name + "' is empty");
    }
    if (strictly_increasing) {
        for (std::size_t i = 1; i < key.size(); ++i) {
            if (!(key[i] > key[i - 1])) {
                throw ValidationError("table: column '" + key_name + "' must be strictly increasing");
            }
        }
    }
    names_.push_back(std::move(key_name));
    columns_.push_back(std::move(key));
}

void Table::add(const std::string& name, std::vector<double> values) {
    if (values.size() != rows()) {
        throw ValidationError("table: column '" + name + "' has " + std::to_string(values.size()) + " rows, expected " +
                              std::to_string(rows()));
    }
    for (const auto& n : names_) {
        if (n == name) {
            throw ValidationError("table: duplicate column '" + name + "'");
        }
    }
    names_.push_back(name);
    columns_.push_back(std::move(values));
}

void Table::add_complex(const std::string& name, const std::vector<cplx>& values) {
    std::vector<double> re(values.size()), im(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        re[i] = values[i].real();
        im[i] = values[i].imag();
    }
    add(name + "_re", std::move(re));
    add(name + "_im", std::move(im));
}

void Table::add_metadata(const std::string& line) { metadata_.push_back(line); }

const std::vector<double>& Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) {
            return columns_[i];
        }
    }
    throw ValidationError("table: no column '" + name + "'");
}

void Table::write_csv(std::ostream& os) const {
    for (const auto& m : metadata_) {
        os << "# " << m << '\n';
    }
    for (std::size_t c = 0; c < names_.size(); ++c) {
        os << (c ? "," : "") << names_[c];
    }
    os << '\n';
    for (std::size_t r = 0; r < rows(); ++r) {
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            os << (c ? "," : "") << format_number(columns_[c][r]);
        }
        os << '\n';
    }
}

std::string Table::to_csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

}  // namespace decohere::cli
