// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 ROSE Contributors

#include "rose/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "rose/errors.hpp"

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "checkpoint serialization assumes a little-endian host");

namespace rose {

namespace {

constexpr char kMagic[4] = {'R', 'O', 'S', 'E'};

void write_u32(std::ostream& out, uint32_t x) {
    char buf[4];
    std::memcpy(buf, &x, 4);
    out.write(buf, 4);
}

void write_u64(std::ostream& out, uint64_t x) {
    char buf[8];
    std::memcpy(buf, &x, 8);
    out.write(buf, 8);
}

uint32_t read_u32(std::istream& in) {
    char buf[4];
    if (!in.read(buf, 4)) {
        throw CheckpointError(CheckpointError::Kind::TruncatedFile, "truncated header");
    }
    uint32_t x;
    std::memcpy(&x, buf, 4);
    return x;
}

uint64_t read_u64(std::istream& in) {
    char buf[8];
    if (!in.read(buf, 8)) {
        throw CheckpointError(CheckpointError::Kind::TruncatedFile, "truncated header");
    }
    uint64_t x;
    std::memcpy(&x, buf, 8);
    return x;
}

void write_tensor_f32(std::ostream& out, const Tensor& t) {
    std::vector<float> buf(t.size());
    for (size_t i = 0; i < t.size(); ++i) {
        buf[i] = static_cast<float>(t.v[i]);
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

void read_tensor_f32(std::istream& in, Tensor& t) {
    std::vector<float> buf(t.size());
    if (!in.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(buf.size() * sizeof(float)))) {
        throw CheckpointError(CheckpointError::Kind::TruncatedFile, "truncated tensor section");
    }
    for (size_t i = 0; i < t.size(); ++i) {
        t.v[i] = static_cast<double>(buf[i]);
    }
}

nlohmann::json config_to_json(const ModelConfig& c) {
    return nlohmann::json{
        {"vocab_size", c.vocab_size}, {"d_model", c.d_model},   {"n_heads", c.n_heads},
        {"n_layers", c.n_layers},     {"d_ff", c.d_ff},         {"max_pos", c.max_pos},
        {"n_classes", c.n_classes},   {"dropout_rate", c.dropout_rate},
    };
}

ModelConfig config_from_json(const nlohmann::json& j) {
    ModelConfig c;
    c.vocab_size = j.at("vocab_size").get<int>();
    c.d_model = j.at("d_model").get<int>();
    c.n_heads = j.at("n_heads").get<int>();
    c.n_layers = j.at("n_layers").get<int>();
    c.d_ff = j.at("d_ff").get<int>();
    c.max_pos = j.at("max_pos").get<int>();
    c.n_classes = j.at("n_classes").get<int>();
    c.dropout_rate = j.at("dropout_rate").get<double>();
    return c;
}

} // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    nlohmann::json manifest = nlohmann::json::array();
    ckpt.params.for_each_tensor([&manifest](const std::string& name, const Tensor& t) {
        manifest.push_back({{"name", name}, {"shape", {t.rows, t.cols}}});
    });
    nlohmann::json header{
        {"config", config_to_json(ckpt.config)},
        {"seed", ckpt.seed},
        {"epoch", ckpt.epoch},
        {"vocab", {{"path", ckpt.vocab_path}, {"hash", ckpt.vocab_hash}}},
        {"tensors", manifest},
        {"optimizer",
         {{"present", ckpt.optimizer.has_value()},
          {"step", ckpt.optimizer ? ckpt.optimizer->step : 0}}},
    };
    const std::string header_str = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out.write(kMagic, 4);
    write_u32(out, kCheckpointVersion);
    write_u64(out, header_str.size());
    out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
    ckpt.params.for_each_tensor(
        [&out](const std::string&, const Tensor& t) { write_tensor_f32(out, t); });
    if (ckpt.optimizer) {
        ckpt.optimizer->m.for_each_tensor(
            [&out](const std::string&, const Tensor& t) { write_tensor_f32(out, t); });
        ckpt.optimizer->v.for_each_tensor(
            [&out](const std::string&, const Tensor& t) { write_tensor_f32(out, t); });
    }
    if (!out) {
        throw IoError("write failed for " + path);
    }
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    char magic[4];
    if (!in.read(magic, 4)) {
        throw CheckpointError(CheckpointError::Kind::TruncatedFile, "file shorter than magic");
    }
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw CheckpointError(CheckpointError::Kind::BadMagic, "bad magic bytes");
    }
    const uint32_t version = read_u32(in);
    if (version != kCheckpointVersion) {
        throw CheckpointError(CheckpointError::Kind::VersionMismatch,
                              "unsupported checkpoint version " + std::to_string(version));
    }
    const uint64_t header_len = read_u64(in);
    std::string header_str(header_len, '\0');
    if (!in.read(header_str.data(), static_cast<std::streamsize>(header_len))) {
        throw CheckpointError(CheckpointError::Kind::TruncatedFile, "truncated JSON header");
    }
    nlohmann::json header = nlohmann::json::parse(header_str, nullptr, false);
    if (header.is_discarded()) {
        throw CheckpointError(CheckpointError::Kind::TruncatedFile, "unparseable JSON header");
    }

    Checkpoint ckpt;
    ckpt.config = config_from_json(header.at("config"));
    ckpt.seed = header.at("seed").get<uint64_t>();
    ckpt.epoch = header.at("epoch").get<int>();
    ckpt.vocab_path = header.at("vocab").at("path").get<std::string>();
    ckpt.vocab_hash = header.at("vocab").at("hash").get<std::string>();
    ckpt.params = zeros_like(ckpt.config);

    // Shapes must match the manifest the file promises.
    size_t idx = 0;
    const auto& manifest = header.at("tensors");
    ckpt.params.for_each_tensor([&](const std::string& name, const Tensor& t) {
        if (idx >= manifest.size()) {
            throw CheckpointError(CheckpointError::Kind::TruncatedFile, "manifest too short");
        }
        const auto& entry = manifest[idx++];
        if (entry.at("name").get<std::string>() != name ||
            entry.at("shape")[0].get<int>() != t.rows ||
            entry.at("shape")[1].get<int>() != t.cols) {
            throw CheckpointError(CheckpointError::Kind::TruncatedFile,
                                  "manifest mismatch at tensor " + name);
        }
    });

    ckpt.params.for_each_tensor(
        [&in](const std::string&, Tensor& t) { read_tensor_f32(in, t); });

    if (header.at("optimizer").at("present").get<bool>()) {
        OptimizerState opt;
        opt.step = header.at("optimizer").at("step").get<int64_t>();
        opt.m = zeros_like(ckpt.config);
        opt.v = zeros_like(ckpt.config);
        opt.m.for_each_tensor([&in](const std::string&, Tensor& t) { read_tensor_f32(in, t); });
        opt.v.for_each_tensor([&in](const std::string&, Tensor& t) { read_tensor_f32(in, t); });
        ckpt.optimizer = std::move(opt);
    }
    return ckpt;
}

} // namespace rose
