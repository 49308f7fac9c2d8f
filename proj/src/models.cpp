#include "adiactl/models.hpp"

#include <json.hpp>

namespace adiactl {

TabulatedModel<double> load_tabulated_model(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValueError(std::string("tabulated model: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValueError("tabulated model: document must be an object");
  for (const auto& [key, _] : doc.items())
    if (key != "times" && key != "matrices") throw ValueError("tabulated model: unknown key '" + key + "'");
  if (!doc.contains("times") || !doc.contains("matrices"))
    throw ValueError("tabulated model: 'times' and 'matrices' are required");

  TabulatedModel<double> model;
  for (const auto& t : doc.at("times")) {
    if (!t.is_number()) throw ValueError("tabulated model: times must be numbers");
    model.times.push_back(t.get<double>());
  }
  std::size_t index = 0;
  for (const auto& m : doc.at("matrices")) {
    const std::string where = "tabulated model: matrices[" + std::to_string(index++) + "]";
    if (!m.is_array() || m.empty()) throw ValueError(where + " must be a non-empty array of rows");
    const auto n = Eigen::Index(m.size());
    CMatrix<double> mat(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = m[std::size_t(i)];
      if (!row.is_array() || Eigen::Index(row.size()) != n) throw ValueError(where + " is not square");
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto& e = row[std::size_t(j)];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          throw ValueError(where + ": entries must be [re, im] pairs");
        mat(i, j) = {e[0].get<double>(), e[1].get<double>()};
      }
    }
    model.matrices.push_back(std::move(mat));
  }
  model.validate();
  return model;
}

}  // namespace adiactl
