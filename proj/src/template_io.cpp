#include "minudesc/template_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace minudesc {

namespace {

// Shortest decimal encoding that round-trips the double exactly.
std::string fmt(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const std::string& path) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(Errc::malformed_file, path + ": bad numeric field '" + s + "'");
  return v;
}

}  // namespace

void save_template(const std::string& path, const Template& t) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  const size_t desc_dim = t.entries.empty() ? 25 : t.entries.front().descriptor.size();
  out << "MDTPL 1\n";
  out << "dims " << t.width << " " << t.height << " " << t.dpi << "\n";
  out << "desc_dim " << desc_dim << "\n";
  out << "count " << t.entries.size() << "\n";
  for (const TemplateEntry& e : t.entries) {
    out << "m " << fmt(e.minutia.x) << " " << fmt(e.minutia.y) << " " << fmt(e.minutia.theta)
        << " " << (e.minutia.kind == MinutiaKind::termination ? "T" : "B");
    for (double d : e.descriptor) out << " " << fmt(d);
    out << "\n";
  }
  if (!out) throw Error(Errc::io_error, "short write to " + path);
}

Template load_template(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "MDTPL")
    throw Error(Errc::malformed_file, path + ": missing MDTPL header");
  if (version != 1)
    throw Error(Errc::version_mismatch, path + ": unsupported version " + std::to_string(version));

  Template t;
  size_t desc_dim = 0, count = 0;
  if (!(in >> word) || word != "dims" || !(in >> t.width >> t.height >> t.dpi))
    throw Error(Errc::malformed_file, path + ": bad dims line");
  if (!(in >> word) || word != "desc_dim" || !(in >> desc_dim))
    throw Error(Errc::malformed_file, path + ": bad desc_dim line");
  if (!(in >> word) || word != "count" || !(in >> count))
    throw Error(Errc::malformed_file, path + ": bad count line");

  t.entries.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    if (!(in >> word) || word != "m")
      throw Error(Errc::malformed_file, path + ": truncated minutia list");
    std::string sx, sy, stheta, skind;
    if (!(in >> sx >> sy >> stheta >> skind))
      throw Error(Errc::malformed_file, path + ": truncated minutia record");
    TemplateEntry e;
    e.minutia.x = parse_double(sx, path);
    e.minutia.y = parse_double(sy, path);
    e.minutia.theta = parse_double(stheta, path);
    if (skind == "T")
      e.minutia.kind = MinutiaKind::termination;
    else if (skind == "B")
      e.minutia.kind = MinutiaKind::bifurcation;
    else
      throw Error(Errc::malformed_file, path + ": bad minutia kind '" + skind + "'");
    e.descriptor.resize(desc_dim);
    for (size_t d = 0; d < desc_dim; ++d) {
      std::string sv;
      if (!(in >> sv)) throw Error(Errc::malformed_file, path + ": truncated descriptor");
      e.descriptor[d] = parse_double(sv, path);
    }
    t.entries.push_back(std::move(e));
  }
  if (in >> word) throw Error(Errc::malformed_file, path + ": trailing content");
  return t;
}

}  // namespace minudesc
