#include "accsplit/problem_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "accsplit/errors.hpp"

namespace accsplit {
namespace {

using nlohmann::json;

json to_array(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json to_row_major(const Matrix& M) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(M.size()));
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) {
      flat.push_back(M(i, j));
    }
  }
  return json(std::move(flat));
}

Vector read_vector(const json& j, const char* key, Index expected) {
  const auto raw = j.at(key).get<std::vector<double>>();
  if (expected >= 0 && static_cast<Index>(raw.size()) != expected) {
    throw InvalidInput(std::string("problem json: '") + key + "' has wrong length");
  }
  return Eigen::Map<const Vector>(raw.data(), static_cast<Index>(raw.size()));
}

Matrix read_row_major(const json& j, const char* key, Index rows, Index cols) {
  const auto raw = j.at(key).get<std::vector<double>>();
  if (static_cast<Index>(raw.size()) != rows * cols) {
    throw InvalidInput(std::string("problem json: '") + key + "' has wrong length");
  }
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      raw.data(), rows, cols);
}

}  // namespace

std::string problem_to_json(const CompositeProblem& problem) {
  const Index n = problem.dimension();
  json out;
  out["schema"] = 1;
  out["n"] = n;

  const auto& f = problem.f();
  if (const auto* quad = f.as_quadratic()) {
    out["f"] = {{"kind", "quadratic"},
                {"Q", to_row_major(quad->Q)},
                {"q", to_array(quad->q)},
                {"m", f.m()},
                {"L", f.L()}};
  } else if (const auto* logit = f.as_logistic()) {
    out["f"] = {{"kind", "logistic_ridge"},
                {"rows", logit->A.rows()},
                {"A", to_row_major(logit->A)},
                {"y", to_array(logit->y)},
                {"ridge", logit->ridge}};
  } else {
    throw UnsupportedOperation("generic smooth oracles cannot be serialized");
  }

  const auto& gk = problem.g().kind();
  if (const auto* l1 = std::get_if<L1Norm>(&gk)) {
    out["g"] = {{"kind", "l1"}, {"lambda", l1->lambda}};
  } else if (const auto* box = std::get_if<BoxIndicator>(&gk)) {
    out["g"] = {{"kind", "box"}, {"lower", to_array(box->lower)}, {"upper", to_array(box->upper)}};
  } else {
    throw UnsupportedOperation("generic prox oracles cannot be serialized");
  }
  return out.dump();
}

CompositeProblem problem_from_json(std::string_view text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("problem json: ") + e.what());
  }
  try {
    if (in.value("schema", 1) != 1) {
      throw InvalidInput("problem json: unsupported schema version");
    }
    const Index n = in.at("n").get<Index>();
    const json& fj = in.at("f");
    const auto fkind = fj.at("kind").get<std::string>();

    auto make_f = [&]() -> SmoothFunction {
      if (fkind == "quadratic") {
        Matrix Q = read_row_major(fj, "Q", n, n);
        Vector q = read_vector(fj, "q", n);
        if (fj.contains("m") && fj.contains("L")) {
          return SmoothFunction::quadratic(std::move(Q), std::move(q), fj.at("m").get<double>(),
                                           fj.at("L").get<double>());
        }
        return SmoothFunction::quadratic(std::move(Q), std::move(q));
      }
      if (fkind == "logistic_ridge") {
        const Index rows = fj.at("rows").get<Index>();
        return SmoothFunction::logistic_ridge(read_row_major(fj, "A", rows, n),
                                              read_vector(fj, "y", rows),
                                              fj.at("ridge").get<double>());
      }
      throw InvalidInput("problem json: unknown f kind '" + fkind + "'");
    };

    const json& gj = in.at("g");
    const auto gkind = gj.at("kind").get<std::string>();
    auto make_g = [&]() -> NonsmoothFunction {
      if (gkind == "l1") {
        return NonsmoothFunction::l1(gj.at("lambda").get<double>());
      }
      if (gkind == "box") {
        return NonsmoothFunction::box(read_vector(gj, "lower", n), read_vector(gj, "upper", n));
      }
      throw InvalidInput("problem json: unknown g kind '" + gkind + "'");
    };
    return CompositeProblem(make_f(), make_g());
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("problem json: ") + e.what());
  }
}

void save_problem(const CompositeProblem& problem, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << problem_to_json(problem) << '\n';
}

CompositeProblem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return problem_from_json(buffer.str());
}

}  // namespace accsplit
