#include "core/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_set>

#include "core/error.hpp"

namespace lucid {
namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto r = std::from_chars(first, s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kInput, "cannot open '" + path.string() + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

bool is_missing_token(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "?";
}

const RawColumn* RawTable::find(const std::string& name) const {
  for (const auto& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<CsvRecord> parse_csv(const std::string& content) {
  std::vector<CsvRecord> records;
  std::size_t i = 0;
  const std::size_t n = content.size();
  if (n >= 3 && content.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;

  std::size_t line = 1;
  CsvRecord rec;
  rec.line = line;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  bool record_has_content = false;

  auto end_field = [&] {
    rec.fields.push_back(field);
    field.clear();
    field_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    if (record_has_content || rec.fields.size() > 1 || !rec.fields[0].empty()) {
      records.push_back(std::move(rec));
    }
    rec = CsvRecord{};
    rec.line = line;
    record_has_content = false;
  };

  for (; i < n; ++i) {
    char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() && !trim(field).empty()) {
          fail(ErrorKind::kInput, "line " + std::to_string(line) +
                                      ": quote inside unquoted field");
        }
        field.clear();
        in_quotes = true;
        field_quoted = true;
        record_has_content = true;
        break;
      case ',':
        end_field();
        record_has_content = true;
        break;
      case '\r':
        if (i + 1 < n && content[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(c);
        record_has_content = true;
    }
  }
  if (in_quotes) {
    fail(ErrorKind::kInput, "line " + std::to_string(rec.line) + ": unterminated quoted field");
  }
  if (record_has_content || !field.empty()) end_record();
  return records;
}

RawTable table_from_csv_text(const std::string& content, const std::string& label_column,
                             const std::string& positive_label,
                             const std::string& source_name) {
  auto records = parse_csv(content);
  if (records.empty()) fail(ErrorKind::kInput, source_name + ": empty file");

  std::vector<std::string> header;
  for (const auto& h : records[0].fields) header.push_back(trim(h));
  {
    std::set<std::string> seen;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (!seen.insert(header[c]).second) {
        fail(ErrorKind::kInput, source_name + ": line 1, column " + std::to_string(c + 1) +
                                    ": duplicate column name '" + header[c] + "'");
      }
    }
  }
  auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    fail(ErrorKind::kInput, source_name + ": label column '" + label_column + "' not found");
  }
  const std::size_t label_idx = static_cast<std::size_t>(label_it - header.begin());
  const std::size_t n = records.size() - 1;
  if (n == 0) fail(ErrorKind::kInput, source_name + ": no data rows");

  RawTable t;
  t.label_column = label_column;
  t.positive_label = positive_label;
  t.labels.resize(n);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == label_idx) continue;
    RawColumn col;
    col.name = header[c];
    col.text.reserve(n);
    t.columns.push_back(std::move(col));
  }

  std::vector<std::string> label_tokens;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      fail(ErrorKind::kInput, source_name + ": line " + std::to_string(rec.line) +
                                  ": expected " + std::to_string(header.size()) +
                                  " fields, found " + std::to_string(rec.fields.size()));
    }
    std::size_t out = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
      std::string cell = trim(rec.fields[c]);
      if (c == label_idx) {
        if (is_missing_token(cell)) {
          fail(ErrorKind::kInput, source_name + ": line " + std::to_string(rec.line) +
                                      ", column '" + label_column + "': missing label");
        }
        if (std::find(label_tokens.begin(), label_tokens.end(), cell) == label_tokens.end()) {
          label_tokens.push_back(cell);
          if (label_tokens.size() > 2) {
            fail(ErrorKind::kInput, source_name + ": line " + std::to_string(rec.line) +
                                        ", column '" + label_column +
                                        "': non-binary label (third distinct value '" +
                                        cell + "')");
          }
        }
        t.labels[r - 1] = cell == positive_label ? 1 : 0;
      } else {
        t.columns[out++].text.push_back(std::move(cell));
      }
    }
  }
  if (label_tokens.size() == 2 && label_tokens[0] != positive_label &&
      label_tokens[1] != positive_label) {
    fail(ErrorKind::kInput, source_name + ": column '" + label_column +
                                "': positive label '" + positive_label + "' not present");
  }
  t.negative_label = "not " + positive_label;
  for (const auto& tok : label_tokens) {
    if (tok != positive_label) t.negative_label = tok;
  }

  for (auto& col : t.columns) {
    col.missing.resize(n);
    col.numeric.assign(n, 0.0);
    bool numeric = true;
    bool any_present = false;
    for (std::size_t r = 0; r < n; ++r) {
      col.missing[r] = is_missing_token(col.text[r]);
      if (col.missing[r]) continue;
      any_present = true;
      if (numeric) {
        if (auto v = parse_double(col.text[r])) {
          col.numeric[r] = *v;
        } else {
          numeric = false;
        }
      }
    }
    col.kind = numeric && any_present ? ColumnKind::kNumeric : ColumnKind::kCategorical;
  }
  return t;
}

RawTable load_csv(const std::filesystem::path& path, const std::string& label_column,
                  const std::string& positive_label) {
  return table_from_csv_text(read_file(path), label_column, positive_label, path.string());
}

// ---------------------------------------------------------------------------

BinarizationConfig BinarizationConfig::parse(const std::string& text) {
  BinarizationConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  auto where = [&] { return "binarization config line " + std::to_string(line_no) + ": "; };

  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::kInput, where() + "expected '<column>.<key> = <values>'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    auto dot = key.rfind('.');
    if (dot == std::string::npos || dot == 0) fail(ErrorKind::kInput, where() + "key must be '<column>.<option>'");
    std::string column = key.substr(0, dot);
    std::string option = key.substr(dot + 1);

    auto numbers = [&] {
      std::vector<double> out;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        auto v = parse_double(item);
        if (!v) fail(ErrorKind::kInput, where() + "'" + item + "' is not a number");
        out.push_back(*v);
      }
      return out;
    };
    auto flag = [&] {
      if (value == "true" || value == "1" || value == "yes") return true;
      if (value == "false" || value == "0" || value == "no") return false;
      fail(ErrorKind::kInput, where() + "expected true/false");
    };

    if (column == "default") {
      if (option != "quantiles") fail(ErrorKind::kInput, where() + "only default.quantiles is supported");
      cfg.default_quantiles = numbers();
      continue;
    }
    ColumnRule& rule = cfg.columns[column];
    if (option == "quantiles") {
      rule.quantiles = numbers();
      for (double q : *rule.quantiles) {
        if (!(q > 0 && q < 1)) fail(ErrorKind::kInput, where() + "quantiles must lie in (0,1)");
      }
    } else if (option == "thresholds") {
      rule.thresholds = numbers();
    } else if (option == "intervals") {
      rule.intervals = numbers();
      if (rule.intervals.size() % 2 != 0) {
        fail(ErrorKind::kInput, where() + "intervals need an even number of cutpoints (lo,hi pairs)");
      }
      for (std::size_t k = 0; k < rule.intervals.size(); k += 2) {
        if (rule.intervals[k] > rule.intervals[k + 1]) {
          fail(ErrorKind::kInput, where() + "interval lower end exceeds upper end");
        }
      }
    } else if (option == "categorical") {
      rule.force_categorical = flag();
    } else if (option == "ignore") {
      rule.ignore = flag();
    } else {
      fail(ErrorKind::kInput, where() + "unknown option '" + option + "'");
    }
  }
  return cfg;
}

BinarizationConfig BinarizationConfig::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) fail(ErrorKind::kArgument, "quantile of empty sample");
  double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

std::string format_number(double v) {
  if (v == 0) v = 0;  // drop negative zero
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

// ---------------------------------------------------------------------------

Dataset::Dataset(std::vector<FeatureInfo> features, std::vector<BitVector> columns,
                 BitVector labels, std::string positive_label, std::string negative_label)
    : features_(std::move(features)),
      columns_(std::move(columns)),
      labels_(std::move(labels)),
      positive_label_(std::move(positive_label)),
      negative_label_(std::move(negative_label)) {
  if (features_.size() != columns_.size()) {
    fail(ErrorKind::kInput, "dataset: feature name count differs from column count");
  }
  if (features_.empty()) fail(ErrorKind::kInput, "dataset: no features (p must be >= 1)");
  for (const auto& c : columns_) {
    if (c.size() != labels_.size()) fail(ErrorKind::kInput, "dataset: column length differs from label length");
  }
  std::set<std::string> names;
  for (const auto& f : features_) {
    if (!names.insert(f.name).second) fail(ErrorKind::kInput, "dataset: duplicate feature name '" + f.name + "'");
  }
}

Dataset Dataset::from_rows(std::vector<std::string> names,
                           const std::vector<std::vector<std::uint8_t>>& rows,
                           const std::vector<std::uint8_t>& labels) {
  if (rows.size() != labels.size()) fail(ErrorKind::kInput, "dataset: row/label count mismatch");
  const std::size_t n = rows.size(), p = names.size();
  std::vector<BitVector> cols(p, BitVector(n));
  BitVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != p) fail(ErrorKind::kInput, "dataset: ragged row " + std::to_string(i));
    for (std::size_t j = 0; j < p; ++j) {
      if (rows[i][j]) cols[j].set(i);
    }
    if (labels[i]) y.set(i);
  }
  std::vector<FeatureInfo> info;
  for (auto& nm : names) info.push_back(FeatureInfo{nm, nm, FeatureKind::kBinary, -1});
  return Dataset(std::move(info), std::move(cols), std::move(y));
}

std::optional<std::size_t> Dataset::find_feature(const std::string& name) const {
  for (std::size_t j = 0; j < features_.size(); ++j) {
    if (features_[j].name == name) return j;
  }
  return std::nullopt;
}

std::vector<std::uint8_t> Dataset::row(std::size_t i) const {
  std::vector<std::uint8_t> r(p());
  for (std::size_t j = 0; j < p(); ++j) r[j] = columns_[j].test(i) ? 1 : 0;
  return r;
}

std::vector<std::vector<std::size_t>> Dataset::onehot_groups() const {
  std::map<std::int32_t, std::vector<std::size_t>> by_id;
  for (std::size_t j = 0; j < p(); ++j) {
    if (features_[j].group >= 0) by_id[features_[j].group].push_back(j);
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto& [id, members] : by_id) out.push_back(std::move(members));
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  const std::size_t m = rows.size();
  std::vector<BitVector> cols(p(), BitVector(m));
  BitVector y(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t i = rows[k];
    if (i >= n()) fail(ErrorKind::kArgument, "subset row out of range");
    for (std::size_t j = 0; j < p(); ++j) {
      if (columns_[j].test(i)) cols[j].set(k);
    }
    if (labels_.test(i)) y.set(k);
  }
  return Dataset(features_, std::move(cols), std::move(y), positive_label_, negative_label_);
}

bool Dataset::operator==(const Dataset& o) const {
  return features_ == o.features_ && columns_ == o.columns_ && labels_ == o.labels_ &&
         positive_label_ == o.positive_label_ && negative_label_ == o.negative_label_;
}

namespace {

constexpr char kMagic[8] = {'L', 'U', 'C', 'I', 'D', 'D', 'S', '\0'};

class Writer {
 public:
  void u8(std::uint8_t v) { out.push_back(v); }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out.insert(out.end(), s.begin(), s.end());
  }
  void bits(const BitVector& b) {
    for (auto w : b.words()) u64(w);
  }
  std::vector<std::uint8_t> out;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  void need(std::size_t k) {
    if (pos_ + k > in_.size()) fail(ErrorKind::kInput, "dataset cache truncated");
  }
  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= std::uint32_t{in_[pos_++]} << (8 * k);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= std::uint64_t{in_[pos_++]} << (8 * k);
    return v;
  }
  std::string str() {
    std::uint32_t len = u32();
    need(len);
    std::string s(reinterpret_cast<const char*>(in_.data() + pos_), len);
    pos_ += len;
    return s;
  }
  BitVector bits(std::size_t n) {
    std::vector<BitVector::Word> w((n + 63) / 64);
    for (auto& x : w) x = u64();
    return BitVector::from_words(n, std::move(w));
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> Dataset::serialize() const {
  Writer w;
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u8(kDatasetCacheVersion);
  w.u64(n());
  w.u64(p());
  w.str(positive_label_);
  w.str(negative_label_);
  for (const auto& f : features_) {
    w.str(f.name);
    w.str(f.column);
    w.u8(static_cast<std::uint8_t>(f.kind));
    w.u32(static_cast<std::uint32_t>(f.group));
  }
  w.bits(labels_);
  for (const auto& c : columns_) w.bits(c);
  return std::move(w.out);
}

Dataset Dataset::deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  for (char c : kMagic) {
    if (r.u8() != static_cast<std::uint8_t>(c)) fail(ErrorKind::kInput, "not a dataset cache (bad magic)");
  }
  if (auto v = r.u8(); v != kDatasetCacheVersion) {
    fail(ErrorKind::kInput, "unsupported dataset cache version " + std::to_string(v));
  }
  std::uint64_t n = r.u64(), p = r.u64();
  if (p > (1u << 24) || n > (std::uint64_t{1} << 40)) fail(ErrorKind::kInput, "dataset cache header is implausible");
  std::string pos = r.str(), neg = r.str();
  std::vector<FeatureInfo> features(p);
  for (auto& f : features) {
    f.name = r.str();
    f.column = r.str();
    std::uint8_t kind = r.u8();
    if (kind > static_cast<std::uint8_t>(FeatureKind::kBinary)) fail(ErrorKind::kInput, "dataset cache: bad feature kind");
    f.kind = static_cast<FeatureKind>(kind);
    f.group = static_cast<std::int32_t>(r.u32());
  }
  BitVector labels = r.bits(n);
  std::vector<BitVector> cols;
  cols.reserve(p);
  for (std::uint64_t j = 0; j < p; ++j) cols.push_back(r.bits(n));
  if (!r.done()) fail(ErrorKind::kInput, "dataset cache has trailing bytes");
  return Dataset(std::move(features), std::move(cols), std::move(labels), std::move(pos), std::move(neg));
}

void Dataset::save(const std::filesystem::path& path) const {
  auto bytes = serialize();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "short write to '" + path.string() + "'");
}

Dataset Dataset::load(const std::filesystem::path& path) {
  std::string content = read_file(path);
  return deserialize(std::span(reinterpret_cast<const std::uint8_t*>(content.data()), content.size()));
}

// ---------------------------------------------------------------------------

Dataset binarize(const RawTable& raw, const BinarizationConfig& config) {
  const std::size_t n = raw.rows();
  for (const auto& [name, rule] : config.columns) {
    if (raw.find(name) == nullptr) {
      fail(ErrorKind::kInput, "binarization config names unknown column '" + name + "'");
    }
  }

  std::vector<FeatureInfo> features;
  std::vector<BitVector> columns;
  std::int32_t next_group = 0;

  auto emit = [&](FeatureInfo info, BitVector bits) {
    features.push_back(std::move(info));
    columns.push_back(std::move(bits));
  };

  for (const auto& col : raw.columns) {
    ColumnRule rule;
    if (auto it = config.columns.find(col.name); it != config.columns.end()) rule = it->second;
    if (rule.ignore) continue;

    BitVector missing(n);
    for (std::size_t r = 0; r < n; ++r) {
      if (col.missing[r]) missing.set(r);
    }
    const bool has_missing = missing.any();
    const bool categorical = col.kind == ColumnKind::kCategorical || rule.force_categorical;

    if (categorical) {
      if (rule.quantiles || !rule.thresholds.empty() || !rule.intervals.empty()) {
        fail(ErrorKind::kInput, "binarization config requests quantiles/thresholds/intervals on categorical column '" +
                                    col.name + "'");
      }
      std::set<std::string> levels;
      for (std::size_t r = 0; r < n; ++r) {
        if (!col.missing[r]) levels.insert(col.text[r]);
      }
      std::size_t distinct = levels.size() + (has_missing ? 1 : 0);
      if (distinct <= 1) continue;  // constant column carries no information
      std::int32_t group = next_group++;
      for (const auto& level : levels) {
        BitVector bits(n);
        for (std::size_t r = 0; r < n; ++r) {
          if (!col.missing[r] && col.text[r] == level) bits.set(r);
        }
        emit(FeatureInfo{col.name + "=" + level, col.name, FeatureKind::kCategory, group}, std::move(bits));
      }
      if (has_missing) {
        emit(FeatureInfo{col.name + " missing", col.name, FeatureKind::kMissing, group}, missing);
      }
      continue;
    }

    std::vector<double> present;
    for (std::size_t r = 0; r < n; ++r) {
      if (!col.missing[r]) present.push_back(col.numeric[r]);
    }
    std::sort(present.begin(), present.end());
    const double lo = present.front(), hi = present.back();

    std::vector<double> cuts = rule.thresholds;
    const auto& qs = rule.quantiles ? *rule.quantiles : config.default_quantiles;
    if (lo < hi) {
      for (double q : qs) cuts.push_back(sorted_quantile(present, q));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<BitVector> emitted_for_column;
    auto is_new = [&](const BitVector& b) {
      return std::find(emitted_for_column.begin(), emitted_for_column.end(), b) ==
             emitted_for_column.end();
    };

    for (double t : cuts) {
      if (t < lo || t >= hi) continue;  // would be constant over present rows
      BitVector bits(n);
      for (std::size_t r = 0; r < n; ++r) {
        if (!col.missing[r] && col.numeric[r] <= t) bits.set(r);
      }
      if (!is_new(bits)) continue;
      emitted_for_column.push_back(bits);
      emit(FeatureInfo{col.name + "<=" + format_number(t), col.name, FeatureKind::kThreshold, -1}, std::move(bits));
    }
    for (std::size_t k = 0; k < rule.intervals.size(); k += 2) {
      double a = rule.intervals[k], b = rule.intervals[k + 1];
      BitVector bits(n);
      for (std::size_t r = 0; r < n; ++r) {
        if (!col.missing[r] && col.numeric[r] >= a && col.numeric[r] <= b) bits.set(r);
      }
      std::size_t c = bits.count();
      if (c == 0 || c == n || !is_new(bits)) continue;
      emitted_for_column.push_back(bits);
      emit(FeatureInfo{col.name + " in [" + format_number(a) + "," + format_number(b) + "]", col.name,
                       FeatureKind::kInterval, -1},
           std::move(bits));
    }
    if (has_missing) {
      emit(FeatureInfo{col.name + " missing", col.name, FeatureKind::kMissing, -1}, missing);
    }
  }

  if (features.empty()) fail(ErrorKind::kInput, "binarization produced no features (all columns constant?)");
  return Dataset(std::move(features), std::move(columns), [&] {
    BitVector y(n);
    for (std::size_t r = 0; r < n; ++r) {
      if (raw.labels[r]) y.set(r);
    }
    return y;
  }(), raw.positive_label, raw.negative_label);
}

// ---------------------------------------------------------------------------

Antecedent Antecedent::make(const Dataset& ds, std::vector<Condition> conditions) {
  if (conditions.empty()) fail(ErrorKind::kArgument, "antecedent needs at least one condition");
  std::sort(conditions.begin(), conditions.end());
  for (std::size_t k = 0; k < conditions.size(); ++k) {
    if (conditions[k].feature >= ds.p()) fail(ErrorKind::kArgument, "antecedent references unknown feature");
    if (k > 0 && conditions[k].feature == conditions[k - 1].feature) {
      fail(ErrorKind::kArgument, "antecedent repeats feature '" + ds.feature(conditions[k].feature).name + "'");
    }
  }
  Antecedent a;
  a.support_ = BitVector(ds.n(), true);
  for (const auto& c : conditions) {
    if (c.value) {
      a.support_ &= ds.column(c.feature);
    } else {
      a.support_.and_not(ds.column(c.feature));
    }
  }
  a.conditions_ = std::move(conditions);
  return a;
}

bool Antecedent::satisfied_by(std::span<const std::uint8_t> row) const {
  for (const auto& c : conditions_) {
    if (c.feature >= row.size()) fail(ErrorKind::kArgument, "row shorter than antecedent feature index");
    if ((row[c.feature] != 0) != c.value) return false;
  }
  return true;
}

bool Antecedent::uses_feature(std::size_t feature) const {
  return std::any_of(conditions_.begin(), conditions_.end(),
                     [&](const Condition& c) { return c.feature == feature; });
}

std::string Antecedent::describe(const Dataset& ds) const {
  std::string out;
  for (std::size_t k = 0; k < conditions_.size(); ++k) {
    if (k) out += " and ";
    if (!conditions_[k].value) out += "not ";
    out += ds.feature(conditions_[k].feature).name;
  }
  return out;
}

bool Antecedent::operator<(const Antecedent& o) const {
  if (conditions_.size() != o.conditions_.size()) return conditions_.size() < o.conditions_.size();
  return std::lexicographical_compare(conditions_.begin(), conditions_.end(), o.conditions_.begin(),
                                      o.conditions_.end());
}

std::vector<Antecedent> mine_antecedents(const Dataset& ds, const MiningOptions& options) {
  if (options.max_cardinality < 1 || options.max_cardinality > 3) {
    fail(ErrorKind::kArgument, "max cardinality must be between 1 and 3");
  }
  if (!(options.min_support > 0 && options.min_support < 1)) {
    fail(ErrorKind::kArgument, "min support must lie strictly between 0 and 1");
  }
  const double n = static_cast<double>(ds.n());
  auto qualifies = [&](const BitVector& s) {
    double c = static_cast<double>(s.count());
    return c / n >= options.min_support && (n - c) / n >= options.min_support;
  };

  std::vector<Condition> atoms;
  for (std::uint32_t j = 0; j < ds.p(); ++j) {
    atoms.push_back({j, true});
    if (options.include_negations) atoms.push_back({j, false});
  }
  std::vector<BitVector> atom_bits;
  for (const auto& a : atoms) atom_bits.push_back(a.value ? ds.column(a.feature) : ~ds.column(a.feature));

  // Candidates are generated in antecedent order (cardinality, then
  // lexicographic), so keeping the first of each support is the dedup rule.
  std::vector<Antecedent> out;
  std::unordered_set<BitVector, BitVectorHash> seen;
  std::vector<std::size_t> pick;
  BitVector all(ds.n(), true);

  for (std::size_t k = 1; k <= options.max_cardinality; ++k) {
    // Enumerate k-combinations of atoms over distinct features.
    std::vector<std::vector<std::size_t>> combos;
    std::vector<std::size_t> idx;
    auto rec = [&](auto&& self, std::size_t start) -> void {
      if (idx.size() == k) {
        combos.push_back(idx);
        return;
      }
      for (std::size_t a = start; a < atoms.size(); ++a) {
        if (!idx.empty() && atoms[a].feature == atoms[idx.back()].feature) continue;
        idx.push_back(a);
        self(self, a + 1);
        idx.pop_back();
      }
    };
    rec(rec, 0);

    std::vector<std::pair<std::vector<Condition>, BitVector>> level;
    for (const auto& combo : combos) {
      BitVector s = all;
      std::vector<Condition> conds;
      for (std::size_t a : combo) {
        s &= atom_bits[a];
        conds.push_back(atoms[a]);
      }
      if (!qualifies(s)) continue;
      level.emplace_back(std::move(conds), std::move(s));
    }
    std::sort(level.begin(), level.end(), [](const auto& x, const auto& y) {
      return std::lexicographical_compare(x.first.begin(), x.first.end(), y.first.begin(), y.first.end());
    });
    for (auto& [conds, s] : level) {
      if (!seen.insert(s).second) continue;
      out.push_back(Antecedent::make(ds, std::move(conds)));
    }
  }
  return out;
}

}  // namespace lucid
