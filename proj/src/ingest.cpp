#include "smotenn/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace smotenn {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool starts_with_keyword(std::string_view line, std::string_view keyword) {
  if (line.size() < keyword.size()) return false;
  if (lower(line.substr(0, keyword.size())) != keyword) return false;
  return line.size() == keyword.size() || std::isspace(static_cast<unsigned char>(line[keyword.size()])) ||
         line[keyword.size()] == '{';
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',') {
      const auto item = trim(s.substr(start, i - start));
      if (!item.empty()) out.emplace_back(item);
      start = i + 1;
    }
  }
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool is_missing(std::string_view s) {
  s = trim(s);
  return s == "?" || s.empty() || lower(s) == "nan" || lower(s) == "na";
}

/// Decides which of the two class values is Minority.
std::string choose_minority(const std::map<std::string, std::size_t>& counts, const std::vector<std::string>& order,
                            const std::optional<std::string>& requested, bool reject_ties, std::string_view source) {
  if (counts.size() != 2) {
    throw ParseError(std::string(source) + ": expected exactly two class values, found " +
                     std::to_string(counts.size()));
  }
  const auto& a = order[0];
  const auto& b = order[1];
  const auto ca = counts.at(a);
  const auto cb = counts.at(b);
  if (requested) {
    if (!counts.contains(*requested)) {
      throw ConfigError(std::string(source) + ": minority value '" + *requested + "' does not occur in the label column");
    }
    const auto mine = counts.at(*requested);
    const auto other = *requested == a ? cb : ca;
    if (mine > other) {
      std::ostringstream msg;
      msg << source << ": minority value '" << *requested << "' gives IR = " << static_cast<double>(other) / mine
          << " < 1 (it is the larger class)";
      throw ConfigError(msg.str());
    }
    return *requested;
  }
  if (ca == cb) {
    if (reject_ties) {
      throw ConfigError(std::string(source) + ": classes are balanced (" + std::to_string(ca) +
                        " each); pass an explicit minority value");
    }
    return a;
  }
  return ca < cb ? a : b;
}

struct RawTable {
  std::string name;
  std::vector<ColumnSpec> columns;  // feature columns only
  std::vector<std::vector<double>> rows;
  std::vector<std::string> classes;
  std::vector<std::string> class_order;
};

Dataset to_dataset(RawTable table, const std::optional<std::string>& minority, bool reject_ties,
                   std::string_view source) {
  std::map<std::string, std::size_t> counts;
  for (const auto& c : table.classes) ++counts[c];
  std::vector<std::string> order;
  for (const auto& c : table.class_order) {
    if (counts.contains(c) && std::find(order.begin(), order.end(), c) == order.end()) order.push_back(c);
  }
  for (const auto& c : table.classes) {
    if (std::find(order.begin(), order.end(), c) == order.end()) order.push_back(c);
  }
  const auto minority_name = choose_minority(counts, order, minority, reject_ties, source);
  const auto majority_name = order[0] == minority_name ? order[1] : order[0];

  const auto m = table.rows.size();
  const auto n = table.columns.size();
  FeatureMatrix f(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  std::vector<Label> labels(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = table.rows[i][j];
    labels[i] = table.classes[i] == minority_name ? Label::Minority : Label::Majority;
  }
  for (std::size_t j = 0; j < n && m > 0; ++j) {
    table.columns[j].observed_min = f.col(static_cast<Eigen::Index>(j)).minCoeff();
    table.columns[j].observed_max = f.col(static_cast<Eigen::Index>(j)).maxCoeff();
  }
  std::vector<SampleId> ids(m);
  for (std::size_t i = 0; i < m; ++i) ids[i] = static_cast<SampleId>(i);
  return Dataset(table.name, std::move(f), std::move(labels), std::move(ids), std::move(table.columns), minority_name,
                 majority_name);
}

struct KeelAttribute {
  std::string name;
  ColumnKind kind = ColumnKind::Real;
  bool nominal = false;
  std::vector<std::string> values;
};

KeelAttribute parse_attribute(std::string_view rest, std::size_t line_no, std::string_view source) {
  rest = trim(rest);
  KeelAttribute attr;
  std::size_t i = 0;
  if (!rest.empty() && (rest[0] == '\'' || rest[0] == '"')) {
    const char q = rest[0];
    const auto close = rest.find(q, 1);
    if (close == std::string_view::npos) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": unterminated attribute name");
    }
    attr.name = std::string(rest.substr(1, close - 1));
    i = close + 1;
  } else {
    while (i < rest.size() && !std::isspace(static_cast<unsigned char>(rest[i])) && rest[i] != '{') ++i;
    attr.name = std::string(rest.substr(0, i));
  }
  if (attr.name.empty()) throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": attribute without a name");
  auto type = trim(rest.substr(i));
  if (!type.empty() && type.front() == '{') {
    const auto close = type.find('}');
    if (close == std::string_view::npos) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": unterminated nominal value list");
    }
    attr.nominal = true;
    attr.kind = ColumnKind::Class;
    attr.values = split_list(type.substr(1, close - 1));
    return attr;
  }
  const auto word_end = type.find_first_of(" \t[");
  const auto word = lower(type.substr(0, word_end));
  if (word == "real" || word == "numeric") {
    attr.kind = ColumnKind::Real;
  } else if (word == "integer") {
    attr.kind = ColumnKind::Integer;
  } else {
    throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": unknown attribute type '" +
                     std::string(type) + "'");
  }
  return attr;
}

}  // namespace

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

Dataset parse_keel_text(std::string_view text, std::string_view source) {
  std::vector<KeelAttribute> attrs;
  std::vector<std::string> inputs;
  std::optional<std::string> output;
  std::string relation = "unnamed";
  bool in_data = false;

  struct Row {
    std::size_t line;
    std::vector<std::string> cells;
  };
  std::vector<Row> rows;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '%') continue;

    if (in_data) {
      std::vector<std::string> cells;
      std::size_t start = 0;
      for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
          cells.emplace_back(trim(line.substr(start, i - start)));
          start = i + 1;
        }
      }
      rows.push_back({line_no, std::move(cells)});
      continue;
    }
    if (line.front() != '@') {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": unexpected content before @data");
    }
    if (starts_with_keyword(line, "@relation")) {
      relation = std::string(trim(line.substr(9)));
      if (relation.size() >= 2 && (relation.front() == '\'' || relation.front() == '"')) {
        relation = relation.substr(1, relation.size() - 2);
      }
    } else if (starts_with_keyword(line, "@attribute")) {
      attrs.push_back(parse_attribute(line.substr(10), line_no, source));
    } else if (starts_with_keyword(line, "@inputs")) {
      inputs = split_list(line.substr(7));
    } else if (starts_with_keyword(line, "@outputs") || starts_with_keyword(line, "@output")) {
      const auto skip = starts_with_keyword(line, "@outputs") ? 8 : 7;
      const auto outs = split_list(line.substr(skip));
      if (outs.size() != 1) {
        throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": expected exactly one output attribute");
      }
      output = outs.front();
    } else if (starts_with_keyword(line, "@data")) {
      in_data = true;
    } else {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": unknown header keyword '" +
                       std::string(line.substr(0, line.find_first_of(" \t"))) + "'");
    }
  }

  if (!in_data) throw ParseError(std::string(source) + ": missing @data section");
  if (attrs.size() < 2) throw ParseError(std::string(source) + ": need at least one input and one class attribute");

  auto find_attr = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      if (attrs[i].name == name) return i;
    }
    throw ParseError(std::string(source) + ": attribute '" + name + "' referenced but not declared");
  };
  const std::size_t class_idx = output ? find_attr(*output) : attrs.size() - 1;
  std::vector<std::size_t> input_idx;
  if (!inputs.empty()) {
    for (const auto& name : inputs) input_idx.push_back(find_attr(name));
  } else {
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      if (i != class_idx) input_idx.push_back(i);
    }
  }

  RawTable table;
  table.name = relation;
  for (auto i : input_idx) {
    if (attrs[i].nominal) {
      throw ParseError(std::string(source) + ": unsupported feature: input attribute '" + attrs[i].name +
                       "' is nominal; only numeric inputs are supported");
    }
    table.columns.push_back({attrs[i].name, attrs[i].kind, 0.0, 0.0});
  }
  if (attrs[class_idx].nominal) table.class_order = attrs[class_idx].values;

  std::size_t missing_rows = 0;
  std::size_t first_missing_line = 0;
  for (const auto& row : rows) {
    if (row.cells.size() != attrs.size()) {
      throw ParseError(std::string(source) + ":" + std::to_string(row.line) + ": data row has " +
                       std::to_string(row.cells.size()) + " values, expected " + std::to_string(attrs.size()));
    }
    if (std::any_of(row.cells.begin(), row.cells.end(), [](const std::string& c) { return is_missing(c); })) {
      if (missing_rows++ == 0) first_missing_line = row.line;
      continue;
    }
    std::vector<double> values;
    values.reserve(input_idx.size());
    for (auto i : input_idx) {
      const auto v = parse_number(row.cells[i]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError(std::string(source) + ":" + std::to_string(row.line) + ": unsupported feature: value '" +
                         row.cells[i] + "' of attribute '" + attrs[i].name + "' is not a finite number");
      }
      values.push_back(*v);
    }
    table.rows.push_back(std::move(values));
    table.classes.push_back(row.cells[class_idx]);
  }
  if (missing_rows > 0) {
    throw ParseError(std::string(source) + ": missing values ('?') in " + std::to_string(missing_rows) +
                     " rows (first at line " + std::to_string(first_missing_line) + "); imputation is not supported");
  }
  return to_dataset(std::move(table), std::nullopt, false, source);
}

Dataset parse_keel(const std::filesystem::path& path) { return parse_keel_text(read_file(path), path.string()); }

Dataset parse_csv_text(std::string_view text, const std::string& label_column,
                       const std::optional<std::string>& minority_value, std::string_view source) {
  std::vector<std::string> lines;
  {
    std::size_t pos = 0;
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      lines.emplace_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
  }
  // Skip a UTF-8 byte order mark and blank leading lines.
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) throw ParseError(std::string(source) + ": empty CSV (header row required)");
  if (lines[first].rfind("\xEF\xBB\xBF", 0) == 0) lines[first].erase(0, 3);

  auto header = split_csv_record(lines[first]);
  for (auto& h : header) h = std::string(trim(h));
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw ConfigError(std::string(source) + ": label column '" + label_column + "' not found in header");
  }
  const auto label_idx = static_cast<std::size_t>(label_it - header.begin());

  RawTable table;
  table.name = std::filesystem::path(std::string(source)).stem().string();
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j != label_idx) table.columns.push_back({header[j], ColumnKind::Real, 0.0, 0.0});
  }

  std::vector<std::size_t> bad_rows;
  for (std::size_t l = first + 1; l < lines.size(); ++l) {
    if (trim(lines[l]).empty()) continue;
    const auto cells = split_csv_record(lines[l]);
    const auto row_index = table.rows.size() + bad_rows.size();
    if (cells.size() != header.size()) {
      throw ParseError(std::string(source) + ":" + std::to_string(l + 1) + ": row has " + std::to_string(cells.size()) +
                       " fields, expected " + std::to_string(header.size()));
    }
    std::vector<double> values;
    bool bad = false;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j == label_idx) continue;
      if (is_missing(cells[j])) {
        bad = true;
        continue;
      }
      const auto v = parse_number(cells[j]);
      if (!v) {
        throw ParseError(std::string(source) + ":" + std::to_string(l + 1) + ": unsupported feature: value '" +
                         cells[j] + "' in column '" + header[j] + "' is not numeric");
      }
      if (!std::isfinite(*v)) bad = true;
      values.push_back(*v);
    }
    if (bad) {
      bad_rows.push_back(row_index);
      continue;
    }
    table.rows.push_back(std::move(values));
    table.classes.emplace_back(trim(cells[label_idx]));
  }
  if (!bad_rows.empty()) {
    std::ostringstream msg;
    msg << source << ": missing or non-finite values in " << bad_rows.size() << " rows (row indices:";
    for (std::size_t i = 0; i < std::min<std::size_t>(bad_rows.size(), 20); ++i) msg << ' ' << bad_rows[i];
    if (bad_rows.size() > 20) msg << " ...";
    msg << ")";
    throw ParseError(msg.str());
  }
  return to_dataset(std::move(table), minority_value, true, source);
}

Dataset parse_csv(const std::filesystem::path& path, const std::string& label_column,
                  const std::optional<std::string>& minority_value) {
  return parse_csv_text(read_file(path), label_column, minority_value, path.string());
}

Dataset load_dataset(const std::filesystem::path& path, const std::string& label_column,
                     const std::optional<std::string>& minority_value, std::optional<std::string> format) {
  const auto fmt = format ? lower(*format) : lower(path.extension().string()) == ".dat" ? "keel" : "csv";
  if (fmt == "keel") return parse_keel(path);
  if (fmt == "csv") return parse_csv(path, label_column, minority_value);
  throw ConfigError("unknown input format '" + fmt + "' (expected csv or keel)");
}

std::pair<Dataset, std::vector<ColumnSpec>> normalize_minmax(const Dataset& dataset) {
  auto columns = dataset.columns();
  const auto& f = dataset.features();
  for (std::size_t j = 0; j < columns.size(); ++j) {
    columns[j].observed_min = f.col(static_cast<Eigen::Index>(j)).minCoeff();
    columns[j].observed_max = f.col(static_cast<Eigen::Index>(j)).maxCoeff();
  }
  return {apply_minmax(dataset, columns), columns};
}

Dataset apply_minmax(const Dataset& dataset, const std::vector<ColumnSpec>& columns) {
  if (columns.size() != dataset.dim()) throw ConfigError("column specs do not match the feature count");
  FeatureMatrix f = dataset.features();
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto c = static_cast<Eigen::Index>(j);
    const double lo = columns[j].observed_min;
    const double range = columns[j].observed_max - lo;
    if (range > 0.0) {
      f.col(c) = (f.col(c).array() - lo) / range;
    } else {
      f.col(c).setZero();
    }
  }
  return dataset.with_features(std::move(f));
}

Dataset denormalize(const Dataset& dataset, const std::vector<ColumnSpec>& columns) {
  if (columns.size() != dataset.dim()) throw ConfigError("column specs do not match the feature count");
  FeatureMatrix f = dataset.features();
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto c = static_cast<Eigen::Index>(j);
    const double lo = columns[j].observed_min;
    const double range = columns[j].observed_max - lo;
    f.col(c) = (f.col(c).array() * range + lo).matrix();
  }
  return dataset.with_features(std::move(f));
}

}  // namespace smotenn
