#include "eigml/cli.hpp"

#include <charconv>
#include <cstdint>
#include <exception>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eigml/bench.hpp"
#include "eigml/data_io.hpp"
#include "eigml/errors.hpp"
#include "eigml/kernel_ridge.hpp"
#include "eigml/mf_sgd.hpp"

namespace eigml::cli {

namespace {

std::string num(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct KrrFitArgs {
  std::string x, y, out;
  double lambda = 0.0;
  double sigma = 0.0;
};

struct KrrPredictArgs {
  std::string model, x, out;
};

struct MfFitArgs {
  std::string ratings, out;
  MFConfig config;
};

struct MfPredictArgs {
  std::string model;
  std::int64_t user = 0;
  std::int64_t item = 0;
};

struct MfFullArgs {
  std::string model, out;
};

struct BenchArgs {
  std::vector<std::int64_t> sizes{1000, 2000, 3000, 4000};
  std::int64_t dim = 5;
  std::int64_t ntest = 200;
  double lambda = 1e-4;
  double sigma = 1.0;
  std::int64_t repeats = 15;
  std::uint64_t seed = 20240601;
  std::string method = bench::default_method_label();
  std::string out;
};

void krr_fit(const KrrFitArgs& a, std::ostream& out) {
  const KernelRidgeConfig config(a.lambda, a.sigma);
  const Matrix x = io::load_matrix(a.x);
  const Vector y = io::load_vector(a.y);
  const KernelRidgeModel model = fit_kernel_ridge(x, y, config);
  io::save_model(model, a.out);
  out << "n=" << x.rows() << " d=" << x.cols() << " lambda=" << num(config.lambda())
      << " sigma=" << num(config.sigma()) << " residual=" << num(solver_residual(model, y))
      << '\n';
}

void krr_predict(const KrrPredictArgs& a) {
  const KernelRidgeModel model = io::load_kernel_ridge(a.model);
  const Matrix x = io::load_matrix(a.x);
  if (x.rows() == 0) {
    io::save_vector(a.out, Vector(0));
    return;
  }
  io::save_vector(a.out, model.predict(x));
}

void mf_fit(const MfFitArgs& a, std::ostream& out) {
  a.config.validate();
  const std::vector<Rating> ratings = io::load_ratings(a.ratings);
  // Report offending indices with their file line (header is line 1).
  for (std::size_t k = 0; k < ratings.size(); ++k) {
    const Rating& r = ratings[k];
    const std::string where = a.ratings + ":" + std::to_string(k + 2) + ": ";
    if (r.user >= a.config.n_users) {
      throw IndexError(where + "user index out of range. (user " + std::to_string(r.user) +
                       ", n_users " + std::to_string(a.config.n_users) + ")");
    }
    if (r.item >= a.config.n_items) {
      throw IndexError(where + "item index out of range. (item " + std::to_string(r.item) +
                       ", n_items " + std::to_string(a.config.n_items) + ")");
    }
  }
  MatrixFactorizationSGD model(a.config);
  model.fit(ratings, true, &out);
  io::save_model(model, a.out);
  out << "global_mean=" << num(model.global_mean()) << '\n';
}

void mf_predict(const MfPredictArgs& a, std::ostream& out) {
  const MatrixFactorizationSGD model = io::load_mf(a.model);
  out << num(model.predict(a.user, a.item)) << '\n';
}

void mf_full(const MfFullArgs& a) {
  const MatrixFactorizationSGD model = io::load_mf(a.model);
  io::save_matrix(a.out, model.full_prediction());
}

void run_bench(const BenchArgs& a, std::ostream& out) {
  const KernelRidgeConfig config(a.lambda, a.sigma);
  std::vector<bench::BenchRecord> records;
  for (const std::int64_t n : a.sizes) {
    const auto [x, y] = bench::gen_synthetic(n, a.dim, a.seed + static_cast<std::uint64_t>(n));
    records.push_back(bench::time_fit(x, y, config, a.repeats, a.method));
    // Prediction on a held-out batch is part of the protocol but is not timed.
    const auto [x_test, y_test] = bench::gen_synthetic(a.ntest, a.dim, a.seed + 1);
    (void)fit_kernel_ridge(x, y, config).predict(x_test);
    const auto& rec = records.back();
    out << "n=" << rec.n << " method=" << rec.method << " fit_time_s=" << num(rec.fit_time_s)
        << " repeats=" << rec.repeats << '\n';
    if (records.size() > 1 && rec.fit_time_s <= records[records.size() - 2].fit_time_s) {
      out << "warning: fit time did not increase from n=" << records[records.size() - 2].n
          << " to n=" << rec.n << '\n';
    }
  }

  std::ofstream file(a.out, std::ios::trunc);
  if (!file) {
    throw IoError("cannot open '" + a.out + "' for writing.");
  }
  file << "n,method,fit_time_s\n";
  for (const auto& rec : records) {
    file << rec.n << ',' << rec.method << ',' << num(rec.fit_time_s) << '\n';
  }
  if (!file.flush()) {
    throw IoError("failed writing '" + a.out + "'.");
  }
}

std::string one_line(std::string msg) {
  for (char& c : msg) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return msg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kernel ridge regression and matrix factorization (SGD) on Eigen", "eigml"};
  app.require_subcommand(1);

  KrrFitArgs krr_fit_args;
  auto* krr_fit_cmd = app.add_subcommand("krr-fit", "Fit a Gaussian kernel ridge model");
  krr_fit_cmd->add_option("--x", krr_fit_args.x, "Training inputs CSV (n x d)")->required();
  krr_fit_cmd->add_option("--y", krr_fit_args.y, "Training responses CSV (n x 1)")->required();
  krr_fit_cmd->add_option("--lambda", krr_fit_args.lambda, "Regularization (>= 0)")->required();
  krr_fit_cmd->add_option("--sigma", krr_fit_args.sigma, "Kernel bandwidth (> 0)")->required();
  krr_fit_cmd->add_option("--out", krr_fit_args.out, "Model archive to write")->required();

  KrrPredictArgs krr_predict_args;
  auto* krr_predict_cmd = app.add_subcommand("krr-predict", "Predict with a kernel ridge model");
  krr_predict_cmd->add_option("--model", krr_predict_args.model, "Model archive")->required();
  krr_predict_cmd->add_option("--x", krr_predict_args.x, "Inputs CSV (m x d)")->required();
  krr_predict_cmd->add_option("--out", krr_predict_args.out, "Predictions CSV")->required();

  MfFitArgs mf_fit_args;
  auto* mf_fit_cmd = app.add_subcommand("mf-fit", "Train a matrix factorization model by SGD");
  mf_fit_cmd->add_option("--ratings", mf_fit_args.ratings, "Ratings CSV (user,item,value)")
      ->required();
  mf_fit_cmd->add_option("--users", mf_fit_args.config.n_users, "Number of users")->required();
  mf_fit_cmd->add_option("--items", mf_fit_args.config.n_items, "Number of items")->required();
  mf_fit_cmd->add_option("--factors", mf_fit_args.config.n_factors, "Latent dimension")
      ->capture_default_str();
  mf_fit_cmd->add_option("--lr", mf_fit_args.config.lr, "Learning rate")->capture_default_str();
  mf_fit_cmd->add_option("--reg", mf_fit_args.config.reg, "Regularization")
      ->capture_default_str();
  mf_fit_cmd->add_option("--epochs", mf_fit_args.config.n_epochs, "Training epochs")
      ->capture_default_str();
  mf_fit_cmd->add_option("--seed", mf_fit_args.config.seed, "Random seed")->capture_default_str();
  mf_fit_cmd->add_option("--out", mf_fit_args.out, "Model archive to write")->required();

  MfPredictArgs mf_predict_args;
  auto* mf_predict_cmd = app.add_subcommand("mf-predict", "Predict one rating");
  mf_predict_cmd->add_option("--model", mf_predict_args.model, "Model archive")->required();
  mf_predict_cmd->add_option("--user", mf_predict_args.user, "User index")->required();
  mf_predict_cmd->add_option("--item", mf_predict_args.item, "Item index")->required();

  MfFullArgs mf_full_args;
  auto* mf_full_cmd = app.add_subcommand("mf-full", "Write the full prediction matrix");
  mf_full_cmd->add_option("--model", mf_full_args.model, "Model archive")->required();
  mf_full_cmd->add_option("--out", mf_full_args.out, "Output CSV (n_users x n_items)")
      ->required();

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Time kernel ridge fits on synthetic data");
  bench_cmd->add_option("--sizes", bench_args.sizes, "Comma separated sample sizes")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--dim", bench_args.dim, "Input dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--ntest", bench_args.ntest, "Held-out prediction rows")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--lambda", bench_args.lambda, "Regularization")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--sigma", bench_args.sigma, "Kernel bandwidth")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--repeats", bench_args.repeats, "Fits averaged per size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench_args.seed, "Data generation seed")->capture_default_str();
  bench_cmd->add_option("--method", bench_args.method, "Label written to the method column")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_args.out, "Output CSV (n,method,fit_time_s)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return e.get_exit_code() != 0 ? e.get_exit_code() : 2;
  }

  try {
    if (krr_fit_cmd->parsed()) {
      krr_fit(krr_fit_args, out);
    } else if (krr_predict_cmd->parsed()) {
      krr_predict(krr_predict_args);
    } else if (mf_fit_cmd->parsed()) {
      mf_fit(mf_fit_args, out);
    } else if (mf_predict_cmd->parsed()) {
      mf_predict(mf_predict_args, out);
    } else if (mf_full_cmd->parsed()) {
      mf_full(mf_full_args);
    } else if (bench_cmd->parsed()) {
      run_bench(bench_args, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << '\n';
    return 1;
  }
  return 0;
}

}  // namespace eigml::cli
