#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "core/dataset.hpp"
#include "core/error.hpp"
#include "random_instances.hpp"

using namespace lucid;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::kInternal;
}

std::string message_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("CSV reader handles quotes, embedded newlines and CRLF") {
  auto recs = parse_csv("a,b\r\n\"x, y\",\"say \"\"hi\"\"\"\n\"multi\nline\",2\n");
  REQUIRE(recs.size() == 3);
  CHECK(recs[1].fields == std::vector<std::string>{"x, y", "say \"hi\""});
  CHECK(recs[2].fields[0] == "multi\nline");
  CHECK(recs[2].line == 3);
  CHECK(kind_of([] { parse_csv("a\n\"open\n"); }) == ErrorKind::kInput);
}

TEST_CASE("ingestion errors name the problem") {
  const std::string csv = "age,sex,y\n20,M,1\n30,F,0\n";
  auto msg = message_of([&] { table_from_csv_text(csv, "label", "1", "in.csv"); });
  CHECK(msg.find("label") != std::string::npos);
  CHECK(msg.find("in.csv") != std::string::npos);
  CHECK(kind_of([&] { table_from_csv_text("age,y\n20,1\n30\n", "y", "1"); }) == ErrorKind::kInput);
  CHECK(kind_of([&] { table_from_csv_text("age,y\n20,1\n30,2\n40,3\n", "y", "1"); }) == ErrorKind::kInput);
  CHECK(kind_of([&] { table_from_csv_text("age,y\n20,a\n30,b\n", "y", "1"); }) == ErrorKind::kInput);
  CHECK(kind_of([&] { table_from_csv_text("", "y", "1"); }) == ErrorKind::kInput);
}

TEST_CASE("type-7 quantiles") {
  std::vector<double> v{1, 2, 3, 4};
  CHECK(sorted_quantile(v, 0.25) == doctest::Approx(1.75));
  CHECK(sorted_quantile(v, 0.5) == doctest::Approx(2.5));
  CHECK(sorted_quantile(v, 0.75) == doctest::Approx(3.25));
  std::vector<double> one{7};
  CHECK(sorted_quantile(one, 0.3) == 7);
}

TEST_CASE("binarized threshold, interval and category features match direct evaluation") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> age(18, 70), cat(0, 2);
  std::bernoulli_distribution coin(0.5), gap(0.1);
  std::string csv = "age,colour,y\n";
  std::vector<int> ages;
  std::vector<std::string> colours;
  const char* names[] = {"red", "green", "blue"};
  for (int i = 0; i < 200; ++i) {
    int a = age(rng);
    std::string c = gap(rng) ? "" : names[cat(rng)];
    ages.push_back(a);
    colours.push_back(c);
    csv += std::to_string(a) + "," + c + "," + (coin(rng) ? "1" : "0") + "\n";
  }
  auto raw = table_from_csv_text(csv, "y", "1");
  auto cfg = BinarizationConfig::parse("age.intervals = 18,25, 26,40\nage.thresholds = 30\n");
  auto ds = binarize(raw, cfg);
  std::set<std::int32_t> groups;
  for (std::size_t j = 0; j < ds.p(); ++j) {
    const auto& f = ds.feature(j);
    CAPTURE(f.name);
    for (std::size_t i = 0; i < ds.n(); ++i) {
      bool expect = false;
      if (f.kind == FeatureKind::kThreshold) {
        expect = ages[i] <= std::stod(f.name.substr(f.name.find("<=") + 2));
      } else if (f.kind == FeatureKind::kInterval) {
        expect = f.name == "age in [18,25]" ? ages[i] >= 18 && ages[i] <= 25 : ages[i] >= 26 && ages[i] <= 40;
      } else if (f.kind == FeatureKind::kCategory) {
        expect = colours[i] == f.name.substr(f.name.find('=') + 1);
        groups.insert(f.group);
      } else if (f.kind == FeatureKind::kMissing) {
        expect = colours[i].empty();
      }
      REQUIRE(ds.column(j).test(i) == expect);
    }
  }
  CHECK(ds.find_feature("age<=30").has_value());
  CHECK(ds.find_feature("age in [18,25]").has_value());
  CHECK(groups.size() == 1);
  // One-hot: every row lies in exactly one member of the colour group.
  auto oh = ds.onehot_groups();
  REQUIRE(oh.size() == 1);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    int hits = 0;
    for (auto j : oh[0]) hits += ds.column(j).test(i);
    CHECK(hits == 1);
  }
}

TEST_CASE("binarization config errors") {
  CHECK(kind_of([] { BinarizationConfig::parse("age.intervals = 1,2,3\n"); }) == ErrorKind::kInput);
  CHECK(kind_of([] { BinarizationConfig::parse("age.bogus = 1\n"); }) == ErrorKind::kInput);
  CHECK(kind_of([] { BinarizationConfig::parse("age.quantiles = 1.5\n"); }) == ErrorKind::kInput);
  auto raw = table_from_csv_text("age,y\n1,1\n2,0\n", "y", "1");
  CHECK(kind_of([&] { binarize(raw, BinarizationConfig::parse("height.thresholds = 3\n")); }) == ErrorKind::kInput);
}

TEST_CASE("cache round trip is exact and byte-stable") {
  std::mt19937_64 rng(10);
  auto ds = testing::random_dataset(rng, 77, 9);
  auto bytes = ds.serialize();
  auto back = Dataset::deserialize(bytes);
  CHECK(back == ds);
  CHECK(back.serialize() == bytes);
  auto bad = bytes;
  bad[0] = 'X';
  CHECK(kind_of([&] { Dataset::deserialize(bad); }) == ErrorKind::kInput);
  std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(bytes.size() / 2));
  CHECK(kind_of([&] { Dataset::deserialize(cut); }) == ErrorKind::kInput);
  CHECK(kind_of([] { Dataset::load("/nonexistent/cache.lucid"); }) == ErrorKind::kInput);
}

TEST_CASE("mining equals a brute-force enumeration of literal sets") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    auto ds = testing::random_dataset(rng, 60, 5, trial % 2 ? 0.3 : 0.5);
    MiningOptions opts{2, 0.1, trial % 3 != 0};
    auto mined = mine_antecedents(ds, opts);

    // Literal sets as bitmasks over (feature, value) pairs, filtered and
    // deduplicated by support in cardinality-then-lexicographic order.
    std::vector<std::vector<Condition>> candidates;
    const std::uint32_t p = static_cast<std::uint32_t>(ds.p());
    for (std::uint32_t a = 0; a < p; ++a) {
      for (bool va : {true, false}) {
        if (!va && !opts.include_negations) continue;
        candidates.push_back({{a, va}});
      }
    }
    for (std::uint32_t a = 0; a < p; ++a) {
      for (bool va : {true, false}) {
        for (std::uint32_t b = a + 1; b < p; ++b) {
          for (bool vb : {true, false}) {
            if ((!va || !vb) && !opts.include_negations) continue;
            candidates.push_back({{a, va}, {b, vb}});
          }
        }
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const auto& x, const auto& y) {
      if (x.size() != y.size()) return x.size() < y.size();
      return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    });
    std::vector<std::vector<Condition>> expect;
    std::set<std::vector<bool>> seen;
    for (const auto& c : candidates) {
      std::vector<bool> s(ds.n());
      std::size_t count = 0;
      for (std::size_t i = 0; i < ds.n(); ++i) {
        auto row = ds.row(i);
        bool ok = true;
        for (const auto& cond : c) ok = ok && (row[cond.feature] != 0) == cond.value;
        s[i] = ok;
        count += ok;
      }
      double frac = static_cast<double>(count) / static_cast<double>(ds.n());
      if (frac < opts.min_support || 1 - frac < opts.min_support) continue;
      if (!seen.insert(s).second) continue;
      expect.push_back(c);
    }
    REQUIRE(mined.size() == expect.size());
    for (std::size_t k = 0; k < mined.size(); ++k) {
      std::vector<Condition> got(mined[k].conditions().begin(), mined[k].conditions().end());
      CHECK(got == expect[k]);
    }
  }
}

TEST_CASE("subset keeps rows in the requested order") {
  std::mt19937_64 rng(13);
  auto ds = testing::random_dataset(rng, 20, 4);
  std::vector<std::size_t> rows{5, 0, 19};
  auto sub = ds.subset(rows);
  REQUIRE(sub.n() == 3);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(sub.row(k) == ds.row(rows[k]));
    CHECK(sub.label(k) == ds.label(rows[k]));
  }
  CHECK(kind_of([&] { std::vector<std::size_t> r{20}; ds.subset(r); }) == ErrorKind::kArgument);
}
