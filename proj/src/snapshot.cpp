// Copyright 2026 The psdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "psdc/snapshot.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"
#include "psdc/errors.hpp"

namespace psdc {
namespace {

constexpr std::size_t kHeaderBytes = 56;

template <typename T>
void put(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(const std::string& path, const PlanarSWE& problem, const State& state,
                    double time) {
  if (state.size() != problem.size()) throw ValidationError("state size does not match the problem");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open snapshot for writing: " + path);
  const SweParams& p = problem.params();
  os.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(p.n));
  put<std::uint32_t>(os, 0);
  put(os, p.length);
  put(os, p.phi_bar);
  put(os, p.f0);
  put(os, p.nu);
  put(os, time);
  os.write(reinterpret_cast<const char*>(state.data()),
           static_cast<std::streamsize>(state.size() * sizeof(double)));
  if (!os) throw Error("failed writing snapshot: " + path);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open snapshot: " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0) {
    throw ValidationError("not a planar SWE snapshot: " + path);
  }
  Snapshot snap;
  snap.params.n = static_cast<int>(get<std::uint32_t>(is));
  get<std::uint32_t>(is);
  snap.params.length = get<double>(is);
  snap.params.phi_bar = get<double>(is);
  snap.params.f0 = get<double>(is);
  snap.params.nu = get<double>(is);
  snap.time = get<double>(is);
  if (!is || snap.params.n < 4 || snap.params.n > (1 << 16)) {
    throw ValidationError("corrupt snapshot header: " + path);
  }
  const std::size_t n = static_cast<std::size_t>(snap.params.n);
  snap.state = State(3 * n * (n / 2 + 1) * 2);
  is.read(reinterpret_cast<char*>(snap.state.data()),
          static_cast<std::streamsize>(snap.state.size() * sizeof(double)));
  if (!is) throw ValidationError("truncated snapshot: " + path);
  static_assert(kHeaderBytes == 8 + 4 + 4 + 5 * sizeof(double));
  return snap;
}

std::string snapshot_to_json(const PlanarSWE& problem, const State& state, double time) {
  using nlohmann::json;
  const SweParams& p = problem.params();
  json j{{"N", p.n}, {"L", p.length}, {"phi_bar", p.phi_bar}, {"f0", p.f0}, {"nu", p.nu}, {"time", time}};
  const char* names[] = {"phi", "zeta", "delta"};
  for (int f = 0; f < 3; ++f) {
    json arr = json::array();
    for (const auto& c : problem.field(state, static_cast<SweField>(f))) arr.push_back({c.real(), c.imag()});
    j[names[f]] = std::move(arr);
  }
  return j.dump();
}

Snapshot snapshot_from_json(const std::string& text) {
  using nlohmann::json;
  Snapshot snap;
  try {
    const json j = json::parse(text);
    snap.params.n = j.at("N").get<int>();
    snap.params.length = j.at("L").get<double>();
    snap.params.phi_bar = j.at("phi_bar").get<double>();
    snap.params.f0 = j.at("f0").get<double>();
    snap.params.nu = j.at("nu").get<double>();
    snap.time = j.at("time").get<double>();
    const std::size_t n = static_cast<std::size_t>(snap.params.n);
    const std::size_t modes = n * (n / 2 + 1);
    snap.state = State(3 * modes * 2);
    const char* names[] = {"phi", "zeta", "delta"};
    for (int f = 0; f < 3; ++f) {
      const json& arr = j.at(names[f]);
      if (arr.size() != modes) throw ValidationError(std::string("wrong mode count in ") + names[f]);
      for (std::size_t i = 0; i < modes; ++i) {
        snap.state[2 * (f * modes + i)] = arr[i].at(0).get<double>();
        snap.state[2 * (f * modes + i) + 1] = arr[i].at(1).get<double>();
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed snapshot JSON: ") + e.what());
  }
  return snap;
}

std::uint64_t state_hash(const State& state) {
  std::uint64_t h = 1469598103934665603ull;
  const auto* bytes = reinterpret_cast<const unsigned char*>(state.data());
  for (std::size_t i = 0; i < state.size() * sizeof(double); ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace psdc
