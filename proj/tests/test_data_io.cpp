#include <doctest.h>

#include <bit>
#include <cstdint>
#include <limits>
#include <random>

#include <json.hpp>

#include "eigml/data_io.hpp"
#include "eigml/errors.hpp"
#include "oracles.hpp"
#include "planted.hpp"
#include "tempdir.hpp"

using eigml::Matrix;
using eigml::Vector;
namespace io = eigml::io;

namespace {

template <typename Derived>
bool bit_equal(const Eigen::DenseBase<Derived>& a, const Eigen::DenseBase<Derived>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (std::bit_cast<std::uint64_t>(a(i, j)) != std::bit_cast<std::uint64_t>(b(i, j))) return false;
  return true;
}

bool bit_equal(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

TEST_CASE("ratings file") {
  TempDir dir;
  const auto path = dir.write("r.csv", "user,item,value\n0,0,5.0\n0,1,3.0\n1,0,4.0\n");
  const auto ratings = io::load_ratings(path);
  REQUIRE(ratings.size() == 3);
  CHECK(ratings[0].user == 0);
  CHECK(ratings[0].item == 0);
  CHECK(ratings[0].value == 5.0);
  CHECK(ratings[1].item == 1);
  CHECK(ratings[1].value == 3.0);
  CHECK(ratings[2].user == 1);
  CHECK(ratings[2].value == 4.0);

  SUBCASE("no trailing newline and CRLF") {
    const auto r = io::load_ratings(dir.write("crlf.csv", "user,item,value\r\n3,4,-1.5"));
    REQUIRE(r.size() == 1);
    CHECK(r[0].user == 3);
    CHECK(r[0].item == 4);
    CHECK(r[0].value == -1.5);
  }
  SUBCASE("header only") {
    CHECK(io::load_ratings(dir.write("h.csv", "user,item,value\n")).empty());
  }
}

TEST_CASE("ratings file errors") {
  TempDir dir;
  CHECK_THROWS_AS(io::load_ratings(dir.file("missing.csv")), eigml::IoError);
  CHECK_THROWS_WITH_AS(io::load_ratings(dir.write("a.csv", "user,item,value\na,b,c\n")),
                       doctest::Contains(":2:"), eigml::ParseError);
  CHECK_THROWS_AS(io::load_ratings(dir.write("b.csv", "u,i,v\n0,0,1\n")), eigml::ParseError);
  CHECK_THROWS_AS(io::load_ratings(dir.write("c.csv", "")), eigml::ParseError);
  CHECK_THROWS_WITH_AS(io::load_ratings(dir.write("d.csv", "user,item,value\n0,0,1\n-1,0,2\n")),
                       doctest::Contains(":3:"), eigml::ParseError);
  CHECK_THROWS_AS(io::load_ratings(dir.write("e.csv", "user,item,value\n0,0\n")), eigml::ParseError);
  CHECK_THROWS_AS(io::load_ratings(dir.write("f.csv", "user,item,value\n0,0,nan\n")),
                  eigml::ParseError);
  CHECK_THROWS_AS(io::load_ratings(dir.write("g.csv", "user,item,value\n0.5,0,1\n")),
                  eigml::ParseError);
}

TEST_CASE("ratings keep file order") {
  TempDir dir;
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> idx(0, 50);
  std::normal_distribution<double> val(3.0, 1.0);
  std::vector<eigml::Rating> ratings;
  for (int k = 0; k < 200; ++k) ratings.push_back({idx(rng), idx(rng), val(rng)});
  const auto path = dir.file("order.csv");
  io::save_ratings(path, ratings);
  const auto back = io::load_ratings(path);
  REQUIRE(back.size() == ratings.size());
  for (std::size_t k = 0; k < ratings.size(); ++k) {
    CHECK(back[k].user == ratings[k].user);
    CHECK(back[k].item == ratings[k].item);
    CHECK(bit_equal(back[k].value, ratings[k].value));
  }
}

TEST_CASE("matrix and vector files") {
  TempDir dir;
  const Matrix m = io::load_matrix(dir.write("m.csv", "1,2\n3,4\n"));
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 2);
  CHECK(m(0, 1) == 2.0);
  CHECK(m(1, 0) == 3.0);

  const Vector v = io::load_vector(dir.write("v.csv", "1.5\n-2\n3e2"));
  REQUIRE(v.size() == 3);
  CHECK(v(2) == 300.0);

  CHECK(io::load_matrix(dir.write("empty.csv", "")).size() == 0);
  CHECK(io::load_vector(dir.write("empty2.csv", "")).size() == 0);
  CHECK_THROWS_WITH_AS(io::load_matrix(dir.write("ragged.csv", "1,2\n3\n")),
                       doctest::Contains("ragged"), eigml::ParseError);
  CHECK_THROWS_WITH_AS(io::load_matrix(dir.write("bad.csv", "1,2\n3,x\n")),
                       doctest::Contains(":2:"), eigml::ParseError);
  CHECK_THROWS_AS(io::load_vector(dir.write("wide.csv", "1,2\n")), eigml::ParseError);
  CHECK_THROWS_AS(io::load_matrix(dir.file("nope.csv")), eigml::IoError);
}

TEST_CASE("matrix files round-trip exactly") {
  TempDir dir;
  std::mt19937_64 rng(8);
  Matrix m = oracle::uniform_matrix(rng, 7, 4, -1e6, 1e6);
  m(0, 0) = std::numeric_limits<double>::denorm_min();
  m(1, 1) = -0.0;
  m(2, 2) = 0.1;
  io::save_matrix(dir.file("m.csv"), m);
  CHECK(bit_equal(io::load_matrix(dir.file("m.csv")), m));

  const Vector v = oracle::uniform_vector(rng, 9, -1.0, 1.0);
  io::save_vector(dir.file("v.csv"), v);
  CHECK(bit_equal(io::load_vector(dir.file("v.csv")), v));
}

TEST_CASE("kernel ridge archives round-trip bit-exactly") {
  TempDir dir;
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = oracle::uniform_matrix(rng, 5 + trial, 1 + trial % 3, -3.0, 3.0);
    const Vector y = oracle::uniform_vector(rng, x.rows(), -10.0, 10.0);
    const auto model = eigml::fit_kernel_ridge(x, y, {0.01 * (trial + 1), 0.3 + 0.1 * trial});
    const auto path = dir.file("krr.json");
    io::save_model(model, path);
    CHECK(io::archive_kind(path) == io::ModelKind::kernel_ridge);
    const auto back = io::load_kernel_ridge(path);
    CHECK(bit_equal(back.alpha(), model.alpha()));
    CHECK(bit_equal(back.x_train(), model.x_train()));
    CHECK(bit_equal(back.lambda(), model.lambda()));
    CHECK(bit_equal(back.sigma(), model.sigma()));
    CHECK(bit_equal(back.y_mean(), model.y_mean()));
  }
}

TEST_CASE("factorization archives round-trip bit-exactly") {
  TempDir dir;
  for (int trial = 0; trial < 20; ++trial) {
    const int users = 3 + trial;
    const int items = 2 + 2 * trial;
    auto ratings = planted::low_rank_ratings(users, items, 2, 0.5, 100 + trial);
    if (ratings.empty()) ratings.push_back({0, 0, 3.0});
    eigml::MatrixFactorizationSGD model(
        {.n_users = users, .n_items = items, .n_factors = 1 + trial % 4, .lr = 0.02,
         .reg = 0.01 * trial, .n_epochs = 3, .seed = static_cast<std::uint32_t>(trial)});
    model.fit(ratings, false);
    const auto path = dir.file("mf.json");
    io::save_model(model, path);
    CHECK(io::archive_kind(path) == io::ModelKind::mf_sgd);
    auto back = io::load_mf(path);
    CHECK(bit_equal(back.user_factors(), model.user_factors()));
    CHECK(bit_equal(back.item_factors(), model.item_factors()));
    CHECK(bit_equal(back.user_bias(), model.user_bias()));
    CHECK(bit_equal(back.item_bias(), model.item_bias()));
    CHECK(bit_equal(back.global_mean(), model.global_mean()));
    CHECK(back.config().n_factors == model.config().n_factors);
    CHECK(back.config().n_epochs == model.config().n_epochs);
    CHECK(back.config().seed == model.config().seed);
    CHECK(bit_equal(back.config().lr, model.config().lr));
    CHECK(bit_equal(back.config().reg, model.config().reg));
    CHECK(back.rng_state() == model.rng_state());

    // Continued training from the archive follows the original stream.
    model.fit(ratings, false);
    back.fit(ratings, false);
    CHECK(bit_equal(back.user_factors(), model.user_factors()));
  }
}

TEST_CASE("archive errors") {
  TempDir dir;
  const auto krr = eigml::fit_kernel_ridge(Matrix::Identity(2, 2), Vector::Ones(2), {0.1, 1.0});
  const auto krr_path = dir.file("krr.json");
  io::save_model(krr, krr_path);
  const auto mf_path = dir.file("mf.json");
  io::save_model(eigml::MatrixFactorizationSGD({.n_users = 2, .n_items = 2}), mf_path);

  CHECK_THROWS_WITH_AS(io::load_kernel_ridge(mf_path), doctest::Contains("kind mismatch"),
                       eigml::FormatError);
  CHECK_THROWS_WITH_AS(io::load_mf(krr_path), doctest::Contains("kind mismatch"),
                       eigml::FormatError);

  auto doc = nlohmann::json::parse(TempDir::read(krr_path));
  doc["version"] = 999;
  const auto v999 = dir.write("v999.json", doc.dump());
  CHECK_THROWS_WITH_AS(io::load_kernel_ridge(v999), doctest::Contains("version 999"),
                       eigml::FormatError);

  doc["version"] = io::kArchiveVersion;
  doc["payload"].erase("alpha");
  CHECK_THROWS_WITH_AS(io::load_kernel_ridge(dir.write("noalpha.json", doc.dump())),
                       doctest::Contains("alpha"), eigml::FormatError);

  CHECK_THROWS_AS(io::load_kernel_ridge(dir.write("junk.json", "not json")), eigml::FormatError);
  CHECK_THROWS_AS(io::load_kernel_ridge(dir.write("other.json", "{\"a\": 1}")), eigml::FormatError);
  CHECK_THROWS_AS(io::load_kernel_ridge(dir.file("missing.json")), eigml::IoError);
  CHECK_THROWS_AS(io::save_model(krr, dir.file("no/such/dir/m.json")), eigml::IoError);
}

TEST_CASE("archive layout") {
  TempDir dir;
  Matrix x(2, 1);
  x << 0.0, 1.0;
  Vector y(2);
  y << 0.0, 2.0;
  const auto path = dir.file("krr.json");
  io::save_model(eigml::fit_kernel_ridge(x, y, {0.1, 1.0}), path);
  const auto doc = nlohmann::json::parse(TempDir::read(path));
  CHECK(doc["format"] == "eigml-model");
  CHECK(doc["kind"] == "kernel_ridge");
  CHECK(doc["version"] == 1);
  CHECK(doc["payload"]["lambda"] == nlohmann::json::array({0.1}));
  CHECK(doc["payload"]["alpha"].size() == 2);
  CHECK(doc["payload"]["x_train"]["shape"] == nlohmann::json::array({2, 1}));
}
