#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "gadtparam/kernel.hpp"
#include "gadtparam/parser.hpp"

namespace testutil {

inline std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  gadtparam::Env env;
  gadtparam::SourceFile file;

  explicit Loaded(const std::string &path) { file = gadtparam::parse_source(slurp(path), env, path); }

  const gadtparam::Term &term(const std::string &n) const { return *file.find_term(n); }
  const gadtparam::Rel &rel(const std::string &n) const { return *file.find_rel(n); }
  const gadtparam::CheckedDecl &decl(const std::string &n) const { return *env.find_decl(n); }
};

inline std::string sample(const char *name) { return std::string(GADTPARAM_SAMPLES_DIR) + "/" + name; }
inline std::string corpus(const char *name) { return std::string(GADTPARAM_CORPUS_DIR) + "/" + name; }

}  // namespace testutil
