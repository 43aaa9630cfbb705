#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "../error.hpp"

namespace kmpp::detail {

/// Splits RFC 4180 text into records of fields. Quoted fields may contain the
/// delimiter, doubled quotes and line breaks. Accepts CRLF or LF line endings;
/// a trailing line break does not produce an empty record. Blank lines are kept
/// as records with a single empty field so row numbers stay aligned.
inline std::vector<std::vector<std::string>> split_csv(std::string_view text, char delimiter = ',') {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  bool after_quote = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
    after_quote = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (field_started || !field.empty())
        throw parse_error("stray quote inside unquoted field", record_line, record.size() + 1);
      quoted = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      end_record();
      ++line;
      record_line = line;
    } else {
      if (after_quote)
        throw parse_error("characters after closing quote", record_line, record.size() + 1);
      field.push_back(c);
    }
  }
  if (quoted) throw parse_error("unterminated quoted field", record_line, record.size() + 1);
  if (!field.empty() || field_started || !record.empty()) end_record();
  return records;
}

/// Quotes a field if it contains the delimiter, a quote or a line break.
inline std::string quote_csv(std::string_view s, char delimiter = ',') {
  if (s.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string_view::npos)
    return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

} // namespace kmpp::detail
