#include "concentrix/model_io.hpp"

#include <json.hpp>

#include "concentrix/error.hpp"

namespace concentrix {

using ojson = nlohmann::ordered_json;

namespace {

ojson matrix_json(const DenseMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", m.entries()}};
}

DenseMatrix matrix_from(const ojson& j) {
  return DenseMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                     j.at("entries").get<std::vector<double>>());
}

ojson series_json(const SeriesCoefficients& s) {
  ojson coeffs = ojson::array();
  for (std::size_t k = 0; k < s.size(); ++k) {
    ojson c = ojson::array();
    for (const auto& e : s.coefficient(k).entries) c.push_back({e.row, e.col, e.value});
    coeffs.push_back(std::move(c));
  }
  return {{"d1", s.d1()},
          {"d2", s.d2()},
          {"modulator", s.modulator() == Modulator::gaussian ? "gaussian" : "rademacher"},
          {"coefficients", std::move(coeffs)}};
}

SeriesCoefficients series_from(const ojson& j) {
  const std::string mod = j.at("modulator").get<std::string>();
  if (mod != "gaussian" && mod != "rademacher") fail(ErrorCode::InvalidInput, "unknown modulator " + mod);
  SeriesCoefficients s(j.at("d1").get<std::size_t>(), j.at("d2").get<std::size_t>(),
                       mod == "gaussian" ? Modulator::gaussian : Modulator::rademacher);
  for (const auto& c : j.at("coefficients")) {
    CoefficientMatrix m;
    for (const auto& e : c)
      m.entries.push_back({e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>(), e.at(2).get<double>()});
    s.add(std::move(m));
  }
  if (s.size() == 0) fail(ErrorCode::InvalidInput, "empty coefficient list");
  return s;
}

}  // namespace

std::string model_to_json(const SamplerModel& m, std::uint64_t seed) {
  ojson params = ojson::object();
  switch (m.kind) {
    case ModelKind::sparsify:
      params["B"] = matrix_json(m.B);
      break;
    case ModelKind::rmm:
      params["B"] = matrix_json(m.B);
      params["C"] = matrix_json(m.C);
      break;
    case ModelKind::kernelFeatures:
      params["kernel"] = m.kernel.kind == KernelKind::angular ? "angular" : "rbf";
      params["alpha"] = m.kernel.alpha;
      params["points"] = m.kernel.points;
      break;
    case ModelKind::columnSubmatrix:
      params["B"] = matrix_json(m.B);
      params["p"] = m.p;
      break;
    case ModelKind::rowColumnSubmatrix:
      params["B"] = matrix_json(m.B);
      params["p"] = m.p;
      params["r"] = m.r;
      break;
    case ModelKind::covariance:
      params["aHalf"] = matrix_json(m.B);
      params["truncation"] = m.truncation;
      break;
    case ModelKind::erLaplacian:
      params["n"] = m.vertices;
      params["p"] = m.p;
      break;
    case ModelKind::gaussianSeries:
      params["series"] = series_json(*m.series);
      break;
    case ModelKind::maxqp: {
      ojson blocks = ojson::array();
      for (const auto& b : m.blocks) blocks.push_back(matrix_json(b));
      params["blocks"] = std::move(blocks);
      break;
    }
  }
  ojson j;
  j["kind"] = to_string(m.kind);
  j["params"] = std::move(params);
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

ModelDescriptor model_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("bad model JSON: ") + e.what());
  }
  try {
    const ModelKind kind = model_kind_from_string(j.at("kind").get<std::string>());
    const ojson& p = j.at("params");
    ModelDescriptor d;
    d.seed = j.at("seed").get<std::uint64_t>();
    switch (kind) {
      case ModelKind::sparsify:
        d.model = sparsify_model(matrix_from(p.at("B")));
        break;
      case ModelKind::rmm:
        d.model = rmm_model(matrix_from(p.at("B")), matrix_from(p.at("C")));
        break;
      case ModelKind::kernelFeatures: {
        KernelSpec spec;
        const std::string k = p.at("kernel").get<std::string>();
        if (k != "angular" && k != "rbf") fail(ErrorCode::InvalidInput, "unknown kernel " + k);
        spec.kind = k == "angular" ? KernelKind::angular : KernelKind::rbf;
        spec.alpha = p.at("alpha").get<double>();
        spec.points = p.at("points").get<std::vector<std::vector<double>>>();
        d.model = kernel_features_model(spec);
        break;
      }
      case ModelKind::columnSubmatrix:
        d.model = column_submatrix_model(matrix_from(p.at("B")), p.at("p").get<double>());
        break;
      case ModelKind::rowColumnSubmatrix:
        d.model = row_column_submatrix_model(matrix_from(p.at("B")), p.at("p").get<double>(),
                                             p.at("r").get<double>());
        break;
      case ModelKind::covariance:
        d.model = covariance_model(matrix_from(p.at("aHalf")), p.at("truncation").get<double>());
        break;
      case ModelKind::erLaplacian:
        d.model = er_laplacian_model(p.at("n").get<std::size_t>(), p.at("p").get<double>());
        break;
      case ModelKind::gaussianSeries:
        d.model = gaussian_series_model(series_from(p.at("series")));
        break;
      case ModelKind::maxqp: {
        std::vector<DenseMatrix> blocks;
        for (const auto& b : p.at("blocks")) blocks.push_back(matrix_from(b));
        d.model = maxqp_model(blocks);
        break;
      }
    }
    return d;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("bad model descriptor: ") + e.what());
  }
}

}  // namespace concentrix
