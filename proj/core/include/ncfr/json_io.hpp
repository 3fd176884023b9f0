// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.
//
// File formats. Parsing is schema-checked with path-qualified error messages;
// emission is deterministic (fixed field order, floating point printed with
// 17 significant digits), so identical inputs give byte-identical output.

#pragma once

#include <string>

#include "ncfr/gallery.hpp"
#include "ncfr/kernels.hpp"
#include "ncfr/soscert.hpp"
#include "ncfr/words.hpp"

namespace ncfr::json_io {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

words::GroupSpec parse_group_spec(const std::string& text);
words::ProductSpec parse_product_spec(const std::string& text);

kernels::PartialKernel parse_kernel(const std::string& text);
std::string emit_kernel(const kernels::PartialKernel& k);

soscert::NcPoly parse_poly(const std::string& text);
std::string emit_poly(const soscert::NcPoly& p);

// Certificates do not embed their group; the polynomial's spec supplies it.
soscert::GramCertificate parse_certificate(const std::string& text,
                                           const words::ProductSpec& spec);
std::string emit_certificate(const soscert::GramCertificate& cert);

std::string emit_gallery_report(const gallery::CounterexampleReport& report);
std::string emit_sample_result(double min_eig, int argmin_trial);
std::string emit_error(const std::string& code, double min_eig);

std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ncfr::json_io
