#include <cstring>
#include <fstream>

#include <json.hpp>

#include "sgf/error.hpp"
#include "sgf/gnns.hpp"

namespace sgf::gnns {

namespace {

constexpr char kMagic[8] = {'S', 'G', 'F', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kVersion = 1;

nlohmann::json config_json(const ModelConfig& c) {
  return {{"num_nodes", c.num_nodes},     {"hidden", c.hidden},
          {"embed_dim", c.embed_dim},     {"mlp_hidden", c.mlp_hidden},
          {"num_types", c.num_types},     {"temperature", c.temperature},
          {"threshold", c.threshold}};
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.num_nodes = j.at("num_nodes").get<std::size_t>();
  c.hidden = j.at("hidden").get<std::size_t>();
  c.embed_dim = j.at("embed_dim").get<std::size_t>();
  c.mlp_hidden = j.at("mlp_hidden").get<std::size_t>();
  c.num_types = j.at("num_types").get<std::size_t>();
  c.temperature = j.at("temperature").get<double>();
  c.threshold = j.at("threshold").get<double>();
  return c;
}

nlohmann::json read_header(std::istream& in, const std::string& path) {
  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t length = 0;
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw DataError("'" + path + "' is not a checkpoint");
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&length), sizeof length);
  if (!in || version != kVersion)
    throw DataError("unsupported checkpoint version in '" + path + "'");
  if (length > (std::uint64_t{1} << 30)) throw DataError("corrupt checkpoint header in '" + path + "'");
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) throw DataError("truncated checkpoint header in '" + path + "'");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt checkpoint header in '" + path + "': " + e.what());
  }
}

}  // namespace

void save_checkpoint(const GnnsParams& params, const std::string& path) {
  nlohmann::json header;
  header["config"] = config_json(params.config);
  std::vector<std::string> codes;
  for (const auto& c : params.registry.codes()) codes.push_back(c.str());
  header["registry"] = codes;
  nlohmann::json shapes = nlohmann::json::array();
  for (const auto& [name, t] : params.weights.tensors())
    shapes.push_back({{"name", name}, {"rows", t->rows()}, {"cols", t->cols()}});
  header["tensors"] = shapes;
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint '" + path + "'");
  const std::uint64_t length = text.size();
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
  out.write(reinterpret_cast<const char*>(&length), sizeof length);
  out.write(text.data(), static_cast<std::streamsize>(length));
  for (const auto& [name, t] : params.weights.tensors())
    out.write(reinterpret_cast<const char*>(t->data()),
              static_cast<std::streamsize>(t->size() * sizeof(double)));
  if (!out) throw DataError("failed writing checkpoint '" + path + "'");
}

nlohmann::json checkpoint_header(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  return read_header(in, path);
}

GnnsParams load_checkpoint(const std::string& path, std::size_t expected_nodes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  const nlohmann::json header = read_header(in, path);
  GnnsParams params;
  try {
    const ModelConfig config = config_from_json(header.at("config"));
    if (expected_nodes && config.num_nodes != expected_nodes)
      throw ConfigError("checkpoint was trained for " + std::to_string(config.num_nodes) +
                        " nodes but the graph has " + std::to_string(expected_nodes));
    params = GnnsParams::initialize(config, 0, {0.5, true});
    std::vector<CanonicalCode> codes;
    for (const auto& s : header.at("registry")) codes.push_back(CanonicalCode::parse(s.get<std::string>()));
    params.registry = TypeRegistry(config.num_types, std::move(codes));
    auto tensors = params.weights.tensors();
    const auto& shapes = header.at("tensors");
    if (shapes.size() != tensors.size()) throw DataError("checkpoint tensor list does not match the model");
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      auto& t = *tensors[i].second;
      if (shapes[i].at("name") != tensors[i].first || shapes[i].at("rows") != t.rows() ||
          shapes[i].at("cols") != t.cols())
        throw DataError("checkpoint tensor '" + tensors[i].first + "' has the wrong shape");
      in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
      if (!in) throw DataError("truncated checkpoint '" + path + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupt checkpoint header in '" + path + "': " + e.what());
  }
  if (!params.weights.all_finite()) throw NumericError("checkpoint contains non-finite weights");
  return params;
}

}  // namespace sgf::gnns
