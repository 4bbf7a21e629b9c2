#pragma once

#include <string>
#include <vector>

namespace speclap {

/// Deterministic CSV writer: 17 significant digits, '.' decimal separator,
/// LF line endings, atomic write via temp-file rename.
class CsvWriter {
public:
    /// `anchor` names the mathematical quantity of the table and is emitted
    /// as a provenance comment line before the header.
    CsvWriter(std::string anchor, std::vector<std::string> columns);

    void add_comment(const std::string& text);
    void add_row(const std::vector<double>& values);
    void add_text_row(const std::vector<std::string>& cells);

    std::string to_string() const;
    void write(const std::string& path) const;

    static std::string format_number(double v);

private:
    std::string anchor_;
    std::vector<std::string> columns_;
    std::vector<std::string> comments_;
    std::vector<std::string> rows_;
};

} // namespace speclap
