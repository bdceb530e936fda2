#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "blicket/problem.hpp"

namespace blicket {

// Raised when a JSONL line cannot be decoded; `field` names the offending key.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string field, const std::string& message)
        : std::runtime_error(message), field_(std::move(field)) {}

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// One problem as a single compact JSON object (no trailing newline).
// Key order is fixed so that identical problems encode to identical bytes.
std::string encode_problem(const Problem& p);
Problem decode_problem(std::string_view line);

// JSONL, one problem per line, LF endings, UTF-8.
std::string dataset_to_string(const Dataset& ds);
Dataset dataset_from_string(std::string_view text);
void write_dataset(const Dataset& ds, const std::string& path);
Dataset read_dataset(const std::string& path);

FoldCounts count_folds(const std::vector<Problem>& problems);

} // namespace blicket
