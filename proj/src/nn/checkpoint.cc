// Copyright 2026 The DouZero-CPP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "douzero/nn/checkpoint.h"

#include <zlib.h>

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "douzero/common/error.h"

namespace douzero::nn {
namespace {

constexpr char kMagic[4] = {'D', 'Z', 'C', 'K'};

class ByteWriter {
 public:
  void Bytes(const void* p, size_t n) {
    const auto* b = static_cast<const uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  template <typename U>
  void Le(U v) {
    for (size_t i = 0; i < sizeof(U); ++i) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void F32(float f) { Le(std::bit_cast<uint32_t>(f)); }
  std::vector<uint8_t>& buf() { return buf_; }

 private:
  std::vector<uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const uint8_t* p, size_t n) : p_(p), n_(n) {}
  template <typename U>
  U Le() {
    Need(sizeof(U));
    U v = 0;
    for (size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p_[pos_ + i]) << (8 * i);
    pos_ += sizeof(U);
    return v;
  }
  float F32() { return std::bit_cast<float>(Le<uint32_t>()); }
  std::string Str(size_t n) {
    Need(n);
    std::string s(reinterpret_cast<const char*>(p_ + pos_), n);
    pos_ += n;
    return s;
  }
  bool Done() const { return pos_ == n_; }

 private:
  void Need(size_t k) const {
    if (pos_ + k > n_) throw IoError("checkpoint record overruns file");
  }
  const uint8_t* p_;
  size_t n_;
  size_t pos_ = 0;
};

uint32_t Crc(const uint8_t* p, size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<size_t>(n, 1u << 30));
    crc = crc32(crc, p, chunk);
    p += chunk;
    n -= chunk;
  }
  return static_cast<uint32_t>(crc);
}

}  // namespace

void WriteCheckpoint(const std::string& path, const std::vector<Tensor>& tensors) {
  ByteWriter w;
  w.Bytes(kMagic, 4);
  w.Le<uint32_t>(kCheckpointVersion);
  w.Le<uint32_t>(static_cast<uint32_t>(tensors.size()));
  for (const auto& t : tensors) {
    uint64_t expect = 1;
    for (uint64_t d : t.dims) expect *= d;
    if (expect != t.data.size()) throw ShapeMismatch("tensor " + t.name + " dims/data mismatch");
    w.Le<uint32_t>(static_cast<uint32_t>(t.name.size()));
    w.Bytes(t.name.data(), t.name.size());
    w.Le<uint32_t>(static_cast<uint32_t>(t.dims.size()));
    for (uint64_t d : t.dims) w.Le<uint64_t>(d);
    for (float f : t.data) w.F32(f);
  }
  const uint32_t crc = Crc(w.buf().data(), w.buf().size());
  w.Le<uint32_t>(crc);

  const std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(target.parent_path(), ec);
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(reinterpret_cast<const char*>(w.buf().data()),
              static_cast<std::streamsize>(w.buf().size()));
    if (!out) throw IoError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename " + tmp + ": " + ec.message());
}

std::vector<Tensor> ReadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw VersionMismatch(path + ": not a checkpoint (bad magic)");
  }
  if (bytes.size() < 16) throw ChecksumMismatch(path + ": file too short");
  const size_t body = bytes.size() - 4;
  ByteReader trailer(bytes.data() + body, 4);
  if (trailer.Le<uint32_t>() != Crc(bytes.data(), body)) {
    throw ChecksumMismatch(path + ": CRC32 mismatch");
  }
  ByteReader r(bytes.data(), body);
  r.Str(4);
  const uint32_t version = r.Le<uint32_t>();
  if (version != kCheckpointVersion) {
    throw VersionMismatch(path + ": format version " + std::to_string(version) +
                          ", expected " + std::to_string(kCheckpointVersion));
  }
  const uint32_t count = r.Le<uint32_t>();
  std::vector<Tensor> tensors;
  tensors.reserve(count);
  for (uint32_t k = 0; k < count; ++k) {
    Tensor t;
    t.name = r.Str(r.Le<uint32_t>());
    const uint32_t rank = r.Le<uint32_t>();
    uint64_t size = 1;
    for (uint32_t i = 0; i < rank; ++i) {
      t.dims.push_back(r.Le<uint64_t>());
      size *= t.dims.back();
    }
    if (size > body) throw IoError(path + ": tensor " + t.name + " larger than file");
    t.data.resize(size);
    for (auto& f : t.data) f = r.F32();
    tensors.push_back(std::move(t));
  }
  if (!r.Done()) throw IoError(path + ": trailing bytes after last tensor");
  return tensors;
}

const Tensor* FindTensor(const std::vector<Tensor>& tensors, const std::string& name) {
  for (const auto& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

template <typename T>
void ExportParams(const ParamRefs<T>& params, const std::string& prefix,
                  std::vector<Tensor>& out) {
  for (const auto* p : params) {
    Tensor t;
    t.name = prefix + p->name;
    t.dims = {static_cast<uint64_t>(p->value.rows()), static_cast<uint64_t>(p->value.cols())};
    t.data.resize(p->value.size());
    for (Eigen::Index i = 0; i < p->value.size(); ++i) t.data[i] = static_cast<float>(p->value(i));
    out.push_back(std::move(t));
  }
}

template <typename T>
void ImportParams(const std::vector<Tensor>& tensors, const std::string& prefix,
                  const ParamRefs<T>& params) {
  for (auto* p : params) {
    const Tensor* t = FindTensor(tensors, prefix + p->name);
    if (!t) throw IoError("checkpoint lacks tensor " + prefix + p->name);
    if (t->dims.size() != 2 || t->dims[0] != static_cast<uint64_t>(p->value.rows()) ||
        t->dims[1] != static_cast<uint64_t>(p->value.cols())) {
      throw ShapeMismatch("tensor " + t->name + " has unexpected shape");
    }
    for (Eigen::Index i = 0; i < p->value.size(); ++i) p->value(i) = static_cast<T>(t->data[i]);
  }
}

void ExportQNetwork(const QNetwork<float>& net, std::vector<Tensor>& out) {
  const auto& c = net.config();
  Tensor cfg;
  cfg.name = net.name() + "/config";
  cfg.data = {static_cast<float>(c.state_size), static_cast<float>(c.lstm_hidden)};
  for (int h : c.mlp_hidden) cfg.data.push_back(static_cast<float>(h));
  cfg.dims = {cfg.data.size()};
  out.push_back(std::move(cfg));
  ExportParams(const_cast<QNetwork<float>&>(net).Params(), "", out);
}

bool HasQNetwork(const std::vector<Tensor>& tensors, const std::string& name) {
  return FindTensor(tensors, name + "/config") != nullptr;
}

QNetwork<float> ImportQNetwork(const std::vector<Tensor>& tensors, const std::string& name) {
  const Tensor* cfg = FindTensor(tensors, name + "/config");
  if (!cfg || cfg->data.size() < 2) throw IoError("checkpoint lacks network " + name);
  QNetConfig c;
  c.state_size = static_cast<int>(cfg->data[0]);
  c.lstm_hidden = static_cast<int>(cfg->data[1]);
  c.mlp_hidden.clear();
  for (size_t i = 2; i < cfg->data.size(); ++i) c.mlp_hidden.push_back(static_cast<int>(cfg->data[i]));
  QNetwork<float> net(c, name);
  ImportParams(tensors, "", net.Params());
  return net;
}

void ExportBidNetwork(const BidNetwork<float>& net, std::vector<Tensor>& out) {
  ExportParams(const_cast<BidNetwork<float>&>(net).Params(), "", out);
}

BidNetwork<float> ImportBidNetwork(const std::vector<Tensor>& tensors, const std::string& name) {
  BidNetwork<float> net(name);
  ImportParams(tensors, "", net.Params());
  return net;
}

void ExportOptimizer(const RmsProp<float>& opt, const ParamRefs<float>& params,
                     std::vector<Tensor>& out) {
  if (opt.square_avg().size() != params.size()) throw ShapeMismatch("optimizer/param mismatch");
  for (size_t k = 0; k < params.size(); ++k) {
    const auto& v = opt.square_avg()[k];
    Tensor t;
    t.name = "opt/" + params[k]->name;
    t.dims = {static_cast<uint64_t>(v.rows()), static_cast<uint64_t>(v.cols())};
    t.data.assign(v.data(), v.data() + v.size());
    out.push_back(std::move(t));
  }
}

void ImportOptimizer(const std::vector<Tensor>& tensors, const ParamRefs<float>& params,
                     RmsProp<float>& opt) {
  auto& acc = opt.square_avg();
  if (acc.size() != params.size()) throw ShapeMismatch("optimizer/param mismatch");
  for (size_t k = 0; k < params.size(); ++k) {
    const Tensor* t = FindTensor(tensors, "opt/" + params[k]->name);
    if (!t) throw IoError("checkpoint lacks optimizer state for " + params[k]->name);
    if (t->data.size() != static_cast<size_t>(acc[k].size())) {
      throw ShapeMismatch("optimizer tensor " + t->name + " has unexpected size");
    }
    std::copy(t->data.begin(), t->data.end(), acc[k].data());
  }
}

void ExportCounter(const std::string& name, uint64_t value, std::vector<Tensor>& out) {
  Tensor t;
  t.name = name;
  for (int i = 0; i < 4; ++i) t.data.push_back(static_cast<float>((value >> (16 * i)) & 0xFFFF));
  t.dims = {4};
  out.push_back(std::move(t));
}

uint64_t ImportCounter(const std::vector<Tensor>& tensors, const std::string& name,
                       uint64_t fallback) {
  const Tensor* t = FindTensor(tensors, name);
  if (!t || t->data.size() != 4) return fallback;
  uint64_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint64_t>(t->data[i]) << (16 * i);
  return v;
}

template void ExportParams<float>(const ParamRefs<float>&, const std::string&,
                                  std::vector<Tensor>&);
template void ExportParams<double>(const ParamRefs<double>&, const std::string&,
                                   std::vector<Tensor>&);
template void ImportParams<float>(const std::vector<Tensor>&, const std::string&,
                                  const ParamRefs<float>&);
template void ImportParams<double>(const std::vector<Tensor>&, const std::string&,
                                   const ParamRefs<double>&);

}  // namespace douzero::nn
