#include "imra/io.hpp"

#include <bit>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>

#include "imra/error.hpp"

namespace imra {

namespace {

using json = nlohmann::ordered_json;

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(u & 0xFF));
    u = static_cast<U>(u >> 8);
  }
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get(const char* what) {
    using U = std::make_unsigned_t<T>;
    if (pos_ + sizeof(T) > bytes_.size()) {
      throw Error(ErrorKind::Truncated, std::string("grid file truncated in ") + what + " at byte " +
                                            std::to_string(pos_) + " of " + std::to_string(bytes_.size()));
    }
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(static_cast<U>(bytes_[pos_ + i]) << (8 * i));
    pos_ += sizeof(T);
    return static_cast<T>(u);
  }

  std::size_t pos() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string describe_magic(std::span<const std::uint8_t> bytes) {
  std::string printable;
  char hex[8];
  std::string hexes;
  for (std::size_t i = 0; i < std::min<std::size_t>(4, bytes.size()); ++i) {
    const auto c = bytes[i];
    printable += std::isprint(c) ? static_cast<char>(c) : '.';
    std::snprintf(hex, sizeof hex, "%s%02x", i ? " " : "", c);
    hexes += hex;
  }
  return "'" + printable + "' (" + hexes + ")";
}

json box_json(const Box& box) {
  json axes = json::array();
  for (const auto& a : box.axes()) axes.push_back({a.lo, a.hi});
  return axes;
}

Box box_from_json(const json& j) {
  std::vector<Interval> axes;
  for (const auto& a : j) axes.push_back({a.at(0).get<std::int64_t>(), a.at(1).get<std::int64_t>()});
  return Box(std::move(axes));
}

}  // namespace

std::vector<std::uint8_t> encode_grid(const GridFunction& grid) {
  std::vector<std::uint8_t> out;
  out.reserve(4 + 4 + 1 + 4 + 16 * static_cast<std::size_t>(grid.dim()) + 8 * grid.size());
  for (const char c : {'I', 'M', 'R', 'A'}) out.push_back(static_cast<std::uint8_t>(c));
  put<std::uint32_t>(out, kGridFormatVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(grid.dim()));
  put<std::int32_t>(out, grid.level());
  for (const auto& a : grid.box().axes()) {
    put<std::int64_t>(out, a.lo);
    put<std::uint64_t>(out, a.extent());
  }
  for (const double v : grid.values()) put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

GridFunction decode_grid(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "IMRA", 4) != 0) {
    throw Error(ErrorKind::Format, "not an IMRA grid file: first 4 bytes are " + describe_magic(bytes));
  }
  Reader r(bytes.subspan(4));
  const auto version = r.get<std::uint32_t>("version");
  if (version != kGridFormatVersion) {
    throw Error(ErrorKind::Format, "unsupported grid format version " + std::to_string(version));
  }
  const int dim = r.get<std::uint8_t>("dimension");
  if (dim < 1 || dim > 4) {
    throw Error(ErrorKind::Format, "grid dimension " + std::to_string(dim) + " outside 1..4");
  }
  const auto level = r.get<std::int32_t>("level");
  std::vector<Interval> axes;
  std::uint64_t count = 1;
  for (int l = 0; l < dim; ++l) {
    const auto lo = r.get<std::int64_t>("axis header");
    const auto extent = r.get<std::uint64_t>("axis header");
    if (extent == 0 || extent > (std::uint64_t{1} << 40) || count > (std::uint64_t{1} << 40) / extent) {
      throw Error(ErrorKind::Format, "axis " + std::to_string(l) + " extent " + std::to_string(extent) +
                                         " is out of range");
    }
    count *= extent;
    axes.push_back({lo, lo + static_cast<std::int64_t>(extent) - 1});
  }
  if (r.remaining() < count * 8) {
    throw Error(ErrorKind::Truncated, "grid payload truncated: expected " + std::to_string(count * 8) +
                                          " bytes, found " + std::to_string(r.remaining()));
  }
  if (r.remaining() > count * 8) {
    throw Error(ErrorKind::Format, "grid file has " + std::to_string(r.remaining() - count * 8) +
                                       " trailing bytes after the payload");
  }
  std::vector<double> values(count);
  for (auto& v : values) v = std::bit_cast<double>(r.get<std::uint64_t>("payload"));
  return GridFunction(level, Box(std::move(axes)), std::move(values));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::Io, "read failed for " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

void write_grid(const std::filesystem::path& path, const GridFunction& grid) {
  write_file(path, encode_grid(grid));
}

GridFunction read_grid(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_grid(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string detail_file_name(int level, const Orientation& s) {
  return "d_" + std::to_string(level) + "_" + s.to_string() + ".imra";
}

std::string pyramid_meta(const WaveletPyramid& pyr) {
  json meta;
  meta["format"] = "imra-pyramid";
  meta["version"] = 1;
  meta["dim"] = pyr.dim;
  meta["bank"] = pyr.bank->id();
  meta["filters"] = format_bank(*pyr.bank);
  meta["j0"] = pyr.j0;
  meta["J"] = pyr.J;
  json boxes = json::array();
  for (int j = pyr.j0; j <= pyr.J; ++j) boxes.push_back({{"level", j}, {"box", box_json(pyr.box_at(j))}});
  meta["boxes"] = boxes;
  meta["coarse"] = "c.imra";
  json channels = json::array();
  for (const auto& [key, grid] : pyr.details) {
    const Orientation s(pyr.dim, key.second);
    channels.push_back({{"level", key.first},
                        {"orientation", s.to_string()},
                        {"file", detail_file_name(key.first, s)},
                        {"box", box_json(grid.box())}});
  }
  meta["details"] = channels;
  return meta.dump(2) + "\n";
}

void write_pyramid(const std::filesystem::path& dir, const WaveletPyramid& pyr) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create directory " + dir.string() + ": " + ec.message());
  const std::string meta = pyramid_meta(pyr);
  write_file(dir / "meta.json", std::span(reinterpret_cast<const std::uint8_t*>(meta.data()), meta.size()));
  write_grid(dir / "c.imra", pyr.coarse);
  for (const auto& [key, grid] : pyr.details) {
    write_grid(dir / detail_file_name(key.first, Orientation(pyr.dim, key.second)), grid);
  }
}

WaveletPyramid read_pyramid(const std::filesystem::path& dir) {
  const auto bytes = read_file(dir / "meta.json");
  json meta;
  try {
    meta = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, (dir / "meta.json").string() + ": " + e.what());
  }
  WaveletPyramid pyr;
  try {
    if (meta.value("format", "") != "imra-pyramid") {
      throw Error(ErrorKind::Format, (dir / "meta.json").string() + " is not a pyramid description");
    }
    pyr.dim = meta.at("dim").get<int>();
    pyr.j0 = meta.at("j0").get<int>();
    pyr.J = meta.at("J").get<int>();
    const auto id = meta.at("bank").get<std::string>();
    if (id.rfind("dd", 0) == 0) {
      pyr.bank = bank_from_id(id);
    } else {
      pyr.bank = std::make_shared<const FilterBank>(parse_bank(meta.at("filters").get<std::string>()));
    }
    for (const auto& b : meta.at("boxes")) pyr.level_boxes.push_back(box_from_json(b.at("box")));
    if (static_cast<int>(pyr.level_boxes.size()) != pyr.J - pyr.j0 + 1) {
      throw Error(ErrorKind::Format, "meta.json box table does not cover levels j0..J");
    }
    pyr.coarse = read_grid(dir / meta.value("coarse", "c.imra"));
    for (const auto& ch : meta.at("details")) {
      const int level = ch.at("level").get<int>();
      const Orientation s = Orientation::parse(ch.at("orientation").get<std::string>());
      GridFunction g = read_grid(dir / ch.at("file").get<std::string>());
      if (g.dim() != pyr.dim || g.level() != level) {
        throw Error(ErrorKind::Format, ch.at("file").get<std::string>() + " does not match its meta entry");
      }
      pyr.details.emplace(std::make_pair(level, s.mask()), std::move(g));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, (dir / "meta.json").string() + ": " + e.what());
  }
  if (pyr.coarse.dim() != pyr.dim || pyr.coarse.level() != pyr.j0) {
    throw Error(ErrorKind::Format, "coarse grid does not match meta.json");
  }
  return pyr;
}

}  // namespace imra
