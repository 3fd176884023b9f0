// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#include "ncfr/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ncfr::json_io {

using nlohmann::json;
using words::GroupSpec;
using words::ProductSpec;
using words::Word;

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  throw SchemaError("schema error at " + path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) schema_fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(path + "/" + key, "missing field");
  return *it;
}

int int_field(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number_integer()) schema_fail(path + "/" + key, "expected an integer");
  return v.get<int>();
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SchemaError("schema error at /: malformed JSON");
  return j;
}

GroupSpec group_spec_of(const json& j, const std::string& path) {
  std::string family = field(j, "family", path).get<std::string>();
  if (family == "free_semigroup") return GroupSpec::free_semigroup(int_field(j, "rank", path));
  if (family == "free_abelian") return GroupSpec::free_abelian(int_field(j, "rank", path));
  if (family == "free_product_cyclic") {
    if (j.contains("orders")) {
      std::vector<int> orders = field(j, "orders", path).get<std::vector<int>>();
      return GroupSpec::free_product_cyclic(std::move(orders));
    }
    int rank = int_field(j, "rank", path);
    return GroupSpec::free_product_cyclic(std::vector<int>(static_cast<size_t>(rank), 2));
  }
  schema_fail(path + "/family", "unknown family '" + family + "'");
}

ProductSpec product_spec_of(const json& j, const std::string& path) {
  if (j.is_object() && j.contains("w")) {
    ProductSpec spec;
    spec.w = group_spec_of(field(j, "w", path), path + "/w");
    const json& y = field(j, "y", path);
    spec.y = y.is_null() ? GroupSpec::trivial() : group_spec_of(y, path + "/y");
    return spec;
  }
  return ProductSpec{group_spec_of(j, path), GroupSpec::trivial()};
}

Word word_of(const json& j, const GroupSpec& spec, const std::string& path) {
  if (!j.is_array()) schema_fail(path, "expected an array");
  if (spec.family() == words::Family::FreeAbelian) {
    std::vector<std::int64_t> exps = j.get<std::vector<std::int64_t>>();
    if (exps.size() != static_cast<size_t>(spec.generators()))
      schema_fail(path, "exponent vector length mismatch");
    return words::word_from_exponents(spec, std::move(exps));
  }
  std::vector<int> letters = j.get<std::vector<int>>();
  for (int c : letters)
    if (c < 1 || c > spec.generators()) schema_fail(path, "generator index out of range");
  return words::reduce(spec, letters);
}

linalg::Mat matrix_of(const json& obj, const std::string& path) {
  const json& re = field(obj, "re", path);
  const json& im = field(obj, "im", path);
  if (!re.is_array() || re.empty() || !re[0].is_array()) schema_fail(path + "/re", "expected a matrix");
  size_t rows = re.size(), cols = re[0].size();
  if (!im.is_array() || im.size() != rows) schema_fail(path + "/im", "re/im shape mismatch");
  linalg::Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows; ++i) {
    if (re[i].size() != cols || im[i].size() != cols) schema_fail(path, "ragged matrix");
    for (size_t j = 0; j < cols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          linalg::Complex(re[i][j].get<double>(), im[i][j].get<double>());
  }
  return m;
}

// --- deterministic emission -------------------------------------------------

class Emitter {
 public:
  Emitter& raw(const std::string& s) {
    out_ += s;
    return *this;
  }
  Emitter& num(double v) { return raw(format_double(v)); }
  Emitter& num(int v) { return raw(std::to_string(v)); }
  Emitter& str(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      if (c == '"' || c == '\\') out_ += '\\';
      out_ += c;
    }
    out_ += '"';
    return *this;
  }
  const std::string& text() const { return out_; }

 private:
  std::string out_;
};

void emit_word(Emitter& e, const Word& w) {
  e.raw("[");
  if (w.spec().family() == words::Family::FreeAbelian) {
    for (size_t i = 0; i < w.exponents().size(); ++i)
      e.raw(i ? "," : "").raw(std::to_string(w.exponents()[i]));
  } else {
    for (size_t i = 0; i < w.letters().size(); ++i)
      e.raw(i ? "," : "").num(w.letters()[i]);
  }
  e.raw("]");
}

void emit_matrix(Emitter& e, const linalg::Mat& m) {
  auto part = [&](bool real) {
    e.raw("[");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      e.raw(i ? ",[" : "[");
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        e.raw(j ? "," : "").num(real ? m(i, j).real() : m(i, j).imag());
      e.raw("]");
    }
    e.raw("]");
  };
  e.raw("\"re\":");
  part(true);
  e.raw(",\"im\":");
  part(false);
}

void emit_group_spec(Emitter& e, const GroupSpec& spec) {
  switch (spec.family()) {
    case words::Family::FreeSemigroup:
      e.raw("{\"family\":\"free_semigroup\",\"rank\":").num(spec.generators()).raw("}");
      break;
    case words::Family::FreeAbelian:
      e.raw("{\"family\":\"free_abelian\",\"rank\":").num(spec.generators()).raw("}");
      break;
    case words::Family::FreeProductCyclic: {
      e.raw("{\"family\":\"free_product_cyclic\",\"orders\":[");
      for (size_t i = 0; i < spec.orders().size(); ++i)
        e.raw(i ? "," : "").num(spec.orders()[i]);
      e.raw("]}");
      break;
    }
  }
}

void emit_product_spec(Emitter& e, const ProductSpec& spec) {
  e.raw("{\"w\":");
  emit_group_spec(e, spec.w);
  e.raw(",\"y\":");
  if (spec.has_y())
    emit_group_spec(e, spec.y);
  else
    e.raw("null");
  e.raw("}");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

GroupSpec parse_group_spec(const std::string& text) {
  return group_spec_of(parse_text(text), "");
}

ProductSpec parse_product_spec(const std::string& text) {
  return product_spec_of(parse_text(text), "");
}

kernels::PartialKernel parse_kernel(const std::string& text) {
  json j = parse_text(text);
  ProductSpec gs = product_spec_of(field(j, "group", ""), "/group");
  int K = int_field(j, "K", "");
  Word wmax = word_of(field(j, "w_max", ""), gs.w, "/w_max");
  const json& entries = field(j, "entries", "");
  if (!entries.is_array()) schema_fail("/entries", "expected an array");
  kernels::EntryMap map;
  int i = 0;
  for (const json& entry : entries) {
    std::string path = "/entries/" + std::to_string(i++);
    Word den = word_of(field(entry, "den", path), gs.w, path + "/den");
    Word num = word_of(field(entry, "num", path), gs.w, path + "/num");
    Word g = entry.contains("g") ? word_of(entry["g"], gs.y, path + "/g")
                                 : words::identity(gs.y);
    linalg::Mat m = matrix_of(entry, path);
    if (m.rows() != K || m.cols() != K) schema_fail(path, "block size mismatch");
    map[kernels::EntryKey{words::fraction(den, num), g}] = m;
  }
  try {
    return kernels::PartialKernel(gs.w, gs.y, wmax, K, std::move(map));
  } catch (const std::invalid_argument& err) {
    throw SchemaError(std::string("schema error at /entries: ") + err.what());
  }
}

std::string emit_kernel(const kernels::PartialKernel& k) {
  Emitter e;
  e.raw("{\"group\":");
  emit_product_spec(e, ProductSpec{k.w_spec(), k.g_spec()});
  e.raw(",\"w_max\":");
  emit_word(e, k.w_max());
  e.raw(",\"K\":").num(k.block_size()).raw(",\"entries\":[");
  bool first = true;
  for (const auto& [key, value] : k.entries()) {
    e.raw(first ? "{" : ",{");
    first = false;
    e.raw("\"den\":");
    emit_word(e, key.frac.den);
    e.raw(",\"num\":");
    emit_word(e, key.frac.num);
    if (k.has_group()) {
      e.raw(",\"g\":");
      emit_word(e, key.g);
    }
    e.raw(",");
    emit_matrix(e, value);
    e.raw("}");
  }
  e.raw("]}\n");
  return e.text();
}

soscert::NcPoly parse_poly(const std::string& text) {
  json j = parse_text(text);
  ProductSpec spec = product_spec_of(field(j, "group", ""), "/group");
  int K = int_field(j, "K", "");
  int rows = j.contains("rows") ? int_field(j, "rows", "") : K;
  soscert::NcPoly p = soscert::make_poly(spec, rows, K);
  const json& terms = field(j, "terms", "");
  if (!terms.is_array()) schema_fail("/terms", "expected an array");
  int i = 0;
  for (const json& term : terms) {
    std::string path = "/terms/" + std::to_string(i++);
    Word den = word_of(field(term, "w_den", path), spec.w, path + "/w_den");
    Word num = word_of(field(term, "w_num", path), spec.w, path + "/w_num");
    Word y = term.contains("y") && !term["y"].is_null()
                 ? word_of(term["y"], spec.y, path + "/y")
                 : words::identity(spec.y);
    linalg::Mat m = matrix_of(term, path);
    if (m.rows() != rows || m.cols() != K) schema_fail(path, "coefficient size mismatch");
    soscert::add_term(p, words::ProductElement{words::fraction(den, num), y}, m);
  }
  return p;
}

std::string emit_poly(const soscert::NcPoly& p) {
  Emitter e;
  e.raw("{\"group\":");
  emit_product_spec(e, p.spec);
  e.raw(",\"K\":").num(p.cols).raw(",\"rows\":").num(p.rows).raw(",\"terms\":[");
  bool first = true;
  for (const auto& [alpha, c] : p.terms) {
    e.raw(first ? "{" : ",{");
    first = false;
    e.raw("\"w_den\":");
    emit_word(e, alpha.w.den);
    e.raw(",\"w_num\":");
    emit_word(e, alpha.w.num);
    e.raw(",\"y\":");
    emit_word(e, alpha.y);
    e.raw(",");
    emit_matrix(e, c);
    e.raw("}");
  }
  e.raw("]}\n");
  return e.text();
}

soscert::GramCertificate parse_certificate(const std::string& text, const ProductSpec& spec) {
  json j = parse_text(text);
  soscert::GramCertificate cert;
  cert.spec = spec;
  cert.m_prime = int_field(j, "y_degree", "");
  cert.residual = field(j, "residual", "").get<double>();
  cert.gram_min_eig = field(j, "gram_min_eig", "").get<double>();
  cert.iterations = int_field(j, "iterations", "");
  const json& mons = field(j, "monomials", "");
  const json& bterms = field(j, "B_terms", "");
  if (!mons.is_array() || !bterms.is_array() || mons.size() != bterms.size())
    schema_fail("/monomials", "monomials and B_terms must be aligned arrays");
  for (size_t i = 0; i < mons.size(); ++i) {
    std::string path = "/monomials/" + std::to_string(i);
    Word w = word_of(field(mons[i], "w", path), spec.w, path + "/w");
    Word y = word_of(field(mons[i], "y", path), spec.y, path + "/y");
    cert.monomials.push_back(words::Monomial{w, y});
    cert.B_terms.push_back(matrix_of(bterms[i], "/B_terms/" + std::to_string(i)));
  }
  if (cert.B_terms.empty()) schema_fail("/B_terms", "certificate has no terms");
  cert.K = static_cast<int>(cert.B_terms.front().cols());
  cert.K_prime = static_cast<int>(cert.B_terms.front().rows());
  return cert;
}

std::string emit_certificate(const soscert::GramCertificate& cert) {
  Emitter e;
  e.raw("{\"monomials\":[");
  for (size_t i = 0; i < cert.monomials.size(); ++i) {
    e.raw(i ? ",{" : "{").raw("\"w\":");
    emit_word(e, cert.monomials[i].w);
    e.raw(",\"y\":");
    emit_word(e, cert.monomials[i].y);
    e.raw("}");
  }
  e.raw("],\"B_terms\":[");
  for (size_t i = 0; i < cert.B_terms.size(); ++i) {
    e.raw(i ? ",{" : "{");
    emit_matrix(e, cert.B_terms[i]);
    e.raw("}");
  }
  e.raw("],\"residual\":").num(cert.residual);
  e.raw(",\"gram_min_eig\":").num(cert.gram_min_eig);
  e.raw(",\"iterations\":").num(cert.iterations);
  e.raw(",\"y_degree\":").num(cert.m_prime);
  e.raw("}\n");
  return e.text();
}

std::string emit_gallery_report(const gallery::CounterexampleReport& report) {
  Emitter e;
  e.raw("{\"name\":").str(report.name);
  e.raw(",\"base_labels\":[");
  for (size_t i = 0; i < report.base_labels.size(); ++i)
    e.raw(i ? "," : "").str(report.base_labels[i]);
  e.raw("],\"base\":{");
  emit_matrix(e, report.base_matrix);
  e.raw("},\"base_min_eig\":").num(report.base_min_eig);
  e.raw(",\"forced_labels\":[");
  for (size_t i = 0; i < report.forced_labels.size(); ++i)
    e.raw(i ? "," : "").str(report.forced_labels[i]);
  e.raw("],\"forced\":{");
  emit_matrix(e, report.forced_submatrix);
  e.raw("},\"forced_det\":").num(report.forced_det);
  e.raw(",\"forced_min_eig\":").num(report.forced_min_eig);
  e.raw(",\"conclusion\":")
      .str(report.conclusion == gallery::Conclusion::NoPsdCompletionExists
               ? "no_psd_completion_exists"
               : "psd_completion_exists");
  e.raw(",\"free_entry_scan\":[");
  for (size_t i = 0; i < report.free_entry_scan.size(); ++i) {
    const auto& [z, lo] = report.free_entry_scan[i];
    e.raw(i ? ",{" : "{");
    e.raw("\"re\":").num(z.real()).raw(",\"im\":").num(z.imag());
    e.raw(",\"min_eig\":").num(lo).raw("}");
  }
  e.raw("],\"extras\":{");
  bool first = true;
  for (const auto& [key, value] : report.extras) {
    e.raw(first ? "" : ",").str(key).raw(":").num(value);
    first = false;
  }
  e.raw("}}\n");
  return e.text();
}

std::string emit_sample_result(double min_eig, int argmin_trial) {
  Emitter e;
  e.raw("{\"min_eig\":").num(min_eig).raw(",\"argmin_trial\":").num(argmin_trial).raw("}\n");
  return e.text();
}

std::string emit_error(const std::string& code, double min_eig) {
  Emitter e;
  e.raw("{\"error\":").str(code).raw(",\"min_eig\":").num(min_eig).raw("}\n");
  return e.text();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace ncfr::json_io
