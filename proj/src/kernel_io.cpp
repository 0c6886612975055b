#include "chaoskit/kernel_io.hpp"

#include <fstream>

namespace chaoskit {

namespace {

template <ChaosScalar T>
T scalar_from_json(const nlohmann::json& v, const char* what) {
  if constexpr (is_exact_v<T>) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return ScalarTraits<T>::parse(v.get<std::string>());
    throw InputError(std::string(what) + ": exact mode expects \"num/den\" strings or integers");
  } else {
    if (v.is_number()) return v.get<double>();
    throw InputError(std::string(what) + ": float mode expects numbers");
  }
}

const nlohmann::json& field(const nlohmann::json& doc, const char* name) {
  const auto it = doc.find(name);
  if (it == doc.end()) throw InputError(std::string("kernel JSON lacks \"") + name + "\"");
  return *it;
}

int int_field(const nlohmann::json& doc, const char* name) {
  const auto& v = field(doc, name);
  if (!v.is_number_integer()) throw InputError(std::string("kernel JSON field \"") + name + "\" must be an integer");
  return v.get<int>();
}

template <ChaosScalar T>
KernelDocument<T> parse_as(const nlohmann::json& doc, Model model, int p, int m) {
  const auto& raw = field(doc, "coeffs");
  if (!raw.is_array()) throw InputError("kernel JSON field \"coeffs\" must be an array");
  std::vector<T> coeffs;
  coeffs.reserve(raw.size());
  for (const auto& v : raw) coeffs.push_back(scalar_from_json<T>(v, "coeffs"));
  T scale_sq = ScalarTraits<T>::from_int(1);
  if (const auto it = doc.find("scale_sq"); it != doc.end()) {
    scale_sq = scalar_from_json<T>(*it, "scale_sq");
    if (scale_sq < 0) throw InputError("scale_sq must be non-negative");
  }
  return {model, {GridKernel<T>(p, m, std::move(coeffs)), scale_sq}};
}

}  // namespace

AnyKernelDocument parse_kernel_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InputError("kernel JSON must be an object");
  const auto& model_field = field(doc, "model");
  const auto& mode_field = field(doc, "mode");
  if (!model_field.is_string() || !mode_field.is_string()) throw InputError("\"model\" and \"mode\" must be strings");
  const Model model = parse_model(model_field.get<std::string>());
  const int p = int_field(doc, "p");
  const int m = int_field(doc, "m");
  const auto mode = mode_field.get<std::string>();
  if (mode == "exact") return parse_as<Rational>(doc, model, p, m);
  if (mode == "float") return parse_as<double>(doc, model, p, m);
  throw InputError("unknown numeric mode \"" + mode + "\" (expected exact or float)");
}

AnyKernelDocument read_kernel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open kernel file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("kernel file " + path + " is not valid JSON: " + e.what());
  }
  return parse_kernel_json(doc);
}

template <ChaosScalar T>
nlohmann::json scalar_to_json(const T& value) {
  if constexpr (is_exact_v<T>)
    return ScalarTraits<T>::to_string(value);
  else
    return value;
}

template <ChaosScalar T>
nlohmann::json kernel_to_json(const ScaledKernel<T>& f, Model model) {
  nlohmann::json doc{{"model", to_string(model)},
                     {"p", f.base.order()},
                     {"m", f.base.resolution()},
                     {"mode", ScalarTraits<T>::name}};
  auto coeffs = nlohmann::json::array();
  for (const T& c : f.base.coeffs()) coeffs.push_back(scalar_to_json(c));
  doc["coeffs"] = std::move(coeffs);
  if (f.scale_sq != ScalarTraits<T>::from_int(1)) doc["scale_sq"] = scalar_to_json(f.scale_sq);
  return doc;
}

template nlohmann::json scalar_to_json(const Rational&);
template nlohmann::json scalar_to_json(const double&);
template nlohmann::json kernel_to_json(const ScaledKernel<Rational>&, Model);
template nlohmann::json kernel_to_json(const ScaledKernel<double>&, Model);

}  // namespace chaoskit
