#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "oneshot/error.hpp"
#include "oneshot/network.hpp"
#include "text.hpp"

namespace oneshot {
namespace {

constexpr std::string_view kMagic = "oneshot-siamese-checkpoint";
constexpr int kVersion = 1;

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string expect_line(std::istream& in, std::string_view key) {
  std::string line;
  while (std::getline(in, line)) {
    if (!text::trim(line).empty()) break;
  }
  if (!in && line.empty()) throw ParseError(fmt::format("checkpoint: missing '{}'", key));
  std::istringstream ss(line);
  std::string word;
  ss >> word;
  if (word != key) {
    throw ParseError(fmt::format("checkpoint: expected '{}', found '{}'", key, word));
  }
  std::string rest;
  std::getline(ss, rest);
  return std::string(text::trim(rest));
}

double read_value(std::istream& in) {
  std::string token;
  if (!(in >> token)) throw ParseError("checkpoint: truncated parameter block");
  const auto v = text::parse_double(token);
  if (!v) throw ParseError(fmt::format("checkpoint: bad value '{}'", token));
  return *v;
}

}  // namespace

void write_checkpoint(std::ostream& out, const SiameseModel& model) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "layers";
  for (auto w : model.layer_sizes()) out << ' ' << w;
  out << '\n';
  out << "activation " << to_string(model.hidden_activation()) << '\n';
  const auto& params = model.parameters();
  for (std::size_t l = 0; l < params.size(); ++l) {
    const auto& w = params[l].weights;
    out << "weights " << l << ' ' << w.rows() << ' ' << w.cols() << '\n';
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) out << (c ? " " : "") << hex(w(r, c));
      out << '\n';
    }
    out << "bias " << l << ' ' << params[l].bias.size() << '\n';
    for (Eigen::Index i = 0; i < params[l].bias.size(); ++i) {
      out << (i ? " " : "") << hex(params[l].bias(i));
    }
    out << '\n';
  }
}

SiameseModel read_checkpoint(std::istream& in) {
  const auto version = expect_line(in, kMagic);
  if (text::parse_int<int>(version) != kVersion) {
    throw ParseError(fmt::format("checkpoint: unsupported version '{}'", version));
  }
  std::vector<std::size_t> sizes;
  for (const auto& tok : text::split_trimmed(expect_line(in, "layers"), ' ')) {
    const auto v = text::parse_int<std::size_t>(tok);
    if (!v) throw ParseError(fmt::format("checkpoint: bad layer width '{}'", tok));
    sizes.push_back(*v);
  }
  const Activation act = parse_activation(expect_line(in, "activation"));
  SiameseModel model(sizes, act);
  auto& params = model.parameters();
  for (std::size_t l = 0; l < params.size(); ++l) {
    const auto expected_w = fmt::format("{} {} {}", l, params[l].weights.rows(),
                                        params[l].weights.cols());
    if (expect_line(in, "weights") != expected_w) {
      throw ParseError(fmt::format("checkpoint: layer {} weight header mismatch", l));
    }
    for (Eigen::Index r = 0; r < params[l].weights.rows(); ++r) {
      for (Eigen::Index c = 0; c < params[l].weights.cols(); ++c) {
        params[l].weights(r, c) = read_value(in);
      }
    }
    if (expect_line(in, "bias") != fmt::format("{} {}", l, params[l].bias.size())) {
      throw ParseError(fmt::format("checkpoint: layer {} bias header mismatch", l));
    }
    for (Eigen::Index i = 0; i < params[l].bias.size(); ++i) params[l].bias(i) = read_value(in);
    std::string rest;
    std::getline(in, rest);
  }
  return model;
}

void save_checkpoint(const std::filesystem::path& path, const SiameseModel& model) {
  std::ofstream out(path);
  if (!out) throw ConfigError(fmt::format("cannot write checkpoint '{}'", path.string()));
  write_checkpoint(out, model);
}

SiameseModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open checkpoint '{}'", path.string()));
  return read_checkpoint(in);
}

}  // namespace oneshot
