#include "stealthgame/grid_model.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "stealthgame/errors.hpp"

namespace stealthgame {
namespace {

std::vector<std::string_view> split_tokens(std::string_view line, bool commas) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  auto is_sep = [commas](char c) {
    return c == ' ' || c == '\t' || c == '\r' || (commas && c == ',');
  };
  while (pos < line.size()) {
    while (pos < line.size() && is_sep(line[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && !is_sep(line[pos])) ++pos;
    if (pos > start) out.push_back(line.substr(start, pos - start));
  }
  return out;
}

std::optional<double> to_double(std::string_view tok) {
  // from_chars for double is available in libstdc++ 11
  double value = 0.0;
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<int> to_int(std::string_view tok) {
  int value = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t stop = nl == std::string_view::npos ? text.size() : nl;
    ++line_no;
    fn(line_no, text.substr(pos, stop - pos));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

[[noreturn]] void fail_at(std::size_t line_no, const std::string& what) {
  throw InputError(fmt::format("line {}: {}", line_no, what));
}

bool connected(const BusNetwork& net) {
  std::vector<int> parent(static_cast<std::size_t>(net.n_bus));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = net.n_bus;
  for (const auto& br : net.branches) {
    const int a = find(br.from - 1);
    const int b = find(br.to - 1);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

std::string MeasurementLabel::str() const {
  switch (kind) {
    case MeasurementKind::kFlow:
      return fmt::format("flow({},{})", a, b);
    case MeasurementKind::kInjection:
      return fmt::format("injection({})", a);
    case MeasurementKind::kOpaque:
      break;
  }
  return fmt::format("row({})", a);
}

void validate_network(const BusNetwork& net) {
  if (net.n_bus < 1) throw InputError("network must have at least one bus");
  if (net.slack < 1 || net.slack > net.n_bus) {
    throw InputError(fmt::format("slack bus {} outside [1, {}]", net.slack, net.n_bus));
  }
  for (const auto& br : net.branches) {
    if (br.from < 1 || br.from > net.n_bus || br.to < 1 || br.to > net.n_bus) {
      throw InputError(fmt::format("dangling bus index in branch {} {}", br.from, br.to));
    }
    if (br.from == br.to) {
      throw InputError(fmt::format("self-loop branch at bus {}", br.from));
    }
    if (!(br.susceptance > 0.0) || !std::isfinite(br.susceptance)) {
      throw InputError(fmt::format("branch {} {} has non-positive susceptance", br.from, br.to));
    }
  }
  if (!connected(net)) throw InputError("network graph is disconnected");
}

BusNetwork parse_network(std::string_view text) {
  BusNetwork net;
  bool have_bus = false;
  bool have_slack = false;
  std::vector<std::size_t> branch_lines;

  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const auto toks = split_tokens(strip_comment(raw), false);
    if (toks.empty()) return;
    const auto& head = toks[0];
    if (head == "bus") {
      if (have_bus) fail_at(line_no, "duplicate 'bus' declaration");
      if (toks.size() != 2) fail_at(line_no, "expected 'bus <n_bus>'");
      const auto n = to_int(toks[1]);
      if (!n || *n < 1) fail_at(line_no, "bus count must be a positive integer");
      net.n_bus = *n;
      have_bus = true;
    } else if (head == "slack") {
      if (have_slack) fail_at(line_no, "duplicate slack declaration");
      if (toks.size() != 2) fail_at(line_no, "expected 'slack <idx>'");
      const auto s = to_int(toks[1]);
      if (!s) fail_at(line_no, "slack index must be an integer");
      net.slack = *s;
      have_slack = true;
    } else if (head == "branch") {
      if (toks.size() != 4) fail_at(line_no, "expected 'branch <from> <to> <b|x:value>'");
      const auto from = to_int(toks[1]);
      const auto to = to_int(toks[2]);
      if (!from || !to) fail_at(line_no, "branch endpoints must be integers");
      std::string_view val = toks[3];
      bool reactance = false;
      if (val.starts_with("x:")) {
        reactance = true;
        val.remove_prefix(2);
      } else if (val.starts_with("b:")) {
        val.remove_prefix(2);
      }
      const auto num = to_double(val);
      if (!num) fail_at(line_no, fmt::format("bad numeric value '{}'", toks[3]));
      if (!(*num > 0.0)) fail_at(line_no, "susceptance/reactance must be positive");
      net.branches.push_back({*from, *to, reactance ? 1.0 / *num : *num});
      branch_lines.push_back(line_no);
    } else {
      fail_at(line_no, fmt::format("unknown directive '{}'", head));
    }
  });

  if (!have_bus) throw InputError("missing 'bus <n_bus>' declaration");
  if (net.slack < 1 || net.slack > net.n_bus) {
    throw InputError(fmt::format("slack bus {} outside [1, {}]", net.slack, net.n_bus));
  }
  for (std::size_t k = 0; k < net.branches.size(); ++k) {
    const auto& br = net.branches[k];
    if (br.from < 1 || br.from > net.n_bus || br.to < 1 || br.to > net.n_bus) {
      fail_at(branch_lines[k], fmt::format("dangling bus index in branch {} {}", br.from, br.to));
    }
    if (br.from == br.to) fail_at(branch_lines[k], "branch endpoints must differ");
  }
  validate_network(net);
  return net;
}

std::string serialize_network(const BusNetwork& net) {
  std::string out = fmt::format("bus {}\nslack {}\n", net.n_bus, net.slack);
  for (const auto& br : net.branches) {
    out += fmt::format("branch {} {} {:.17g}\n", br.from, br.to, br.susceptance);
  }
  return out;
}

JacobianMatrix build_dc_jacobian(const BusNetwork& net) {
  validate_network(net);
  const Eigen::Index n_bus = net.n_bus;
  const Eigen::Index n_br = static_cast<Eigen::Index>(net.branches.size());

  // Full angle-space rows first, slack column dropped at the end.
  Matrix flows = Matrix::Zero(n_br, n_bus);
  for (Eigen::Index k = 0; k < n_br; ++k) {
    const auto& br = net.branches[static_cast<std::size_t>(k)];
    flows(k, br.from - 1) += br.susceptance;
    flows(k, br.to - 1) -= br.susceptance;
  }
  Matrix injections = Matrix::Zero(n_bus, n_bus);
  for (Eigen::Index k = 0; k < n_br; ++k) {
    const auto& br = net.branches[static_cast<std::size_t>(k)];
    injections.row(br.from - 1) += flows.row(k);
    injections.row(br.to - 1) -= flows.row(k);
  }

  Matrix full(n_br + n_bus, n_bus);
  full << flows, injections;

  JacobianMatrix jac;
  jac.h.resize(full.rows(), n_bus - 1);
  Eigen::Index col = 0;
  for (Eigen::Index c = 0; c < n_bus; ++c) {
    if (c == net.slack - 1) continue;
    jac.h.col(col++) = full.col(c);
  }
  for (const auto& br : net.branches) {
    jac.row_labels.push_back({MeasurementKind::kFlow, br.from, br.to});
  }
  for (int b = 1; b <= net.n_bus; ++b) {
    jac.row_labels.push_back({MeasurementKind::kInjection, b, 0});
  }
  return jac;
}

JacobianMatrix load_matrix(std::string_view text) {
  std::vector<std::vector<double>> rows;
  for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const auto toks = split_tokens(strip_comment(raw), true);
    if (toks.empty()) return;
    std::vector<double> row;
    row.reserve(toks.size());
    for (const auto& tok : toks) {
      const auto v = to_double(tok);
      if (!v) fail_at(line_no, fmt::format("non-numeric token '{}'", tok));
      row.push_back(*v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail_at(line_no, fmt::format("ragged row: {} columns, expected {}", row.size(),
                                   rows.front().size()));
    }
    rows.push_back(std::move(row));
  });
  if (rows.empty()) throw InputError("matrix file is empty");

  JacobianMatrix jac;
  jac.h.resize(static_cast<Eigen::Index>(rows.size()),
               static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      jac.h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    jac.row_labels.push_back({MeasurementKind::kOpaque, static_cast<int>(r + 1), 0});
  }
  return jac;
}

}  // namespace stealthgame
