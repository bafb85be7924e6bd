#include "kverify/model_config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "kverify/error.hpp"

namespace kverify {

namespace {

ModelKind parse_kind(const std::string& s) {
  for (ModelKind k : {ModelKind::RoundSphere, ModelKind::FlatTorus, ModelKind::FubiniStudy,
                      ModelKind::ComplexHyperbolic, ModelKind::Product, ModelKind::Scaled, ModelKind::Conformal}) {
    if (s == model_kind_name(k)) return k;
  }
  fail(ErrorCode::ParseError, "unknown model kind '" + s + "'");
}

template <typename T>
T scalar(const YAML::Node& node, const char* key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(ErrorCode::ParseError, std::string("key '") + key + "' has an invalid value");
  }
}

ModelSpec parse_node(const YAML::Node& node, int depth) {
  if (depth > 16) fail(ErrorCode::ParseError, "model spec nesting is too deep");
  if (!node.IsMap()) fail(ErrorCode::ParseError, "model spec must be a mapping");
  static const std::set<std::string> known = {"kind",      "name",  "N",      "n",        "c",       "radius",
                                              "lambda",    "amplitude", "width", "center", "children"};
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!known.count(key)) fail(ErrorCode::ParseError, "unknown key '" + key + "'");
  }
  if (!node["kind"]) fail(ErrorCode::ParseError, "missing key 'kind'");
  ModelSpec spec;
  spec.kind = parse_kind(scalar<std::string>(node["kind"], "kind"));
  if (node["name"]) spec.name = scalar<std::string>(node["name"], "name");
  if (node["N"]) spec.complex_dim = scalar<int>(node["N"], "N");
  if (node["n"]) spec.real_dim = scalar<int>(node["n"], "n");
  if (node["c"]) spec.curvature = scalar<double>(node["c"], "c");
  if (node["radius"]) spec.radius = scalar<double>(node["radius"], "radius");
  if (node["lambda"]) spec.scale = scalar<double>(node["lambda"], "lambda");
  if (node["amplitude"]) spec.amplitude = scalar<double>(node["amplitude"], "amplitude");
  if (node["width"]) spec.width = scalar<double>(node["width"], "width");
  if (node["center"]) spec.center = scalar<std::vector<double>>(node["center"], "center");
  if (spec.kind == ModelKind::ComplexHyperbolic && !node["c"]) spec.curvature = -1.0;
  if (node["children"]) {
    if (!node["children"].IsSequence()) fail(ErrorCode::ParseError, "'children' must be a list");
    for (const auto& child : node["children"]) spec.children.push_back(parse_node(child, depth + 1));
  }
  return spec;
}

// Shortest text that parses back to the same double.
std::string number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void emit(YAML::Emitter& out, const ModelSpec& spec, bool top) {
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << model_kind_name(spec.kind);
  if (top && !spec.name.empty()) out << YAML::Key << "name" << YAML::Value << spec.name;
  switch (spec.kind) {
    case ModelKind::FubiniStudy:
    case ModelKind::ComplexHyperbolic:
      out << YAML::Key << "N" << YAML::Value << spec.complex_dim;
      out << YAML::Key << "c" << YAML::Value << number(spec.curvature);
      break;
    case ModelKind::RoundSphere:
      out << YAML::Key << "n" << YAML::Value << spec.real_dim;
      out << YAML::Key << "radius" << YAML::Value << number(spec.radius);
      break;
    case ModelKind::FlatTorus:
      out << YAML::Key << "n" << YAML::Value << spec.real_dim;
      break;
    case ModelKind::Scaled:
      out << YAML::Key << "lambda" << YAML::Value << number(spec.scale);
      break;
    case ModelKind::Conformal:
      out << YAML::Key << "amplitude" << YAML::Value << number(spec.amplitude);
      out << YAML::Key << "width" << YAML::Value << number(spec.width);
      if (!spec.center.empty()) {
        out << YAML::Key << "center" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (double x : spec.center) out << number(x);
        out << YAML::EndSeq;
      }
      break;
    default:
      break;
  }
  if (!spec.children.empty()) {
    out << YAML::Key << "children" << YAML::Value << YAML::BeginSeq;
    for (const auto& c : spec.children) emit(out, c, false);
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
}

}  // namespace

ModelSpec parse_model_spec(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid YAML: ") + e.what());
  }
  return parse_node(root, 0);
}

ModelSpec load_model_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::UnknownModel, "cannot open model spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model_spec(buf.str());
}

std::string model_spec_to_yaml(const ModelSpec& spec) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  emit(out, spec, true);
  return std::string(out.c_str()) + "\n";
}

ModelManifold resolve_model(const std::string& name_or_path) {
  for (const auto& name : catalog_names()) {
    if (name == name_or_path) return make_catalog_model(name);
  }
  std::error_code ec;
  if (!std::filesystem::is_regular_file(name_or_path, ec)) {
    fail(ErrorCode::UnknownModel, "'" + name_or_path + "' is neither a catalog model nor a spec file");
  }
  return make_model(load_model_spec(name_or_path));
}

}  // namespace kverify
