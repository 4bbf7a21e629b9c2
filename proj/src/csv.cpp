#include "speclap/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace speclap {

CsvWriter::CsvWriter(std::string anchor, std::vector<std::string> columns)
    : anchor_(std::move(anchor)), columns_(std::move(columns)) {}

std::string CsvWriter::format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::add_comment(const std::string& text) { comments_.push_back(text); }

void CsvWriter::add_row(const std::vector<double>& values) {
    std::ostringstream os;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << format_number(values[i]);
    }
    rows_.push_back(os.str());
}

void CsvWriter::add_text_row(const std::vector<std::string>& cells) {
    std::ostringstream os;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    rows_.push_back(os.str());
}

std::string CsvWriter::to_string() const {
    std::ostringstream os;
    os << "# quantity: " << anchor_ << "\n";
    for (const auto& c : comments_) os << "# " << c << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) os << ',';
        os << columns_[i];
    }
    os << "\n";
    for (const auto& r : rows_) os << r << "\n";
    return os.str();
}

void CsvWriter::write(const std::string& path) const {
    // Atomic replace for regular files; special files (pipes, devices) are
    // streamed directly, since renaming over them would destroy them.
    std::error_code ec;
    auto status = std::filesystem::status(path, ec);
    if (!ec && std::filesystem::exists(status) && !std::filesystem::is_regular_file(status)) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write output file: " + path);
        out << to_string();
        return;
    }
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write output file: " + tmp);
        out << to_string();
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move output into place: " + path);
}

} // namespace speclap
