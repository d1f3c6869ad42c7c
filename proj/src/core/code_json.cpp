#include <json.hpp>

#include "advchan/codes.hpp"
#include "advchan/error.hpp"
#include "json_util.hpp"

namespace advchan::codes {

namespace {
constexpr const char* kFormat = "advchan-chunked-code";
constexpr int kVersion = 1;
constexpr const char* kHexDigits = "0123456789abcdef";
}  // namespace

std::string bits_to_hex(std::span<const Bit> bits) {
  std::string hex;
  hex.reserve((bits.size() + 3) / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    unsigned nibble = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      nibble <<= 1;
      if (i + j < bits.size()) {
        nibble |= bits[i + j] & 1U;
      }
    }
    hex.push_back(kHexDigits[nibble]);
  }
  return hex;
}

Bits hex_to_bits(std::string_view hex, std::size_t length) {
  if (hex.size() != (length + 3) / 4) {
    throw ParseError("hex string of length " + std::to_string(hex.size()) +
                     " cannot hold exactly " + std::to_string(length) + " bits");
  }
  Bits bits;
  bits.reserve(length);
  for (char ch : hex) {
    unsigned nibble = 0;
    if (ch >= '0' && ch <= '9') {
      nibble = static_cast<unsigned>(ch - '0');
    } else if (ch >= 'a' && ch <= 'f') {
      nibble = static_cast<unsigned>(ch - 'a' + 10);
    } else if (ch >= 'A' && ch <= 'F') {
      nibble = static_cast<unsigned>(ch - 'A' + 10);
    } else {
      throw ParseError(std::string("invalid hex digit '") + ch + "'");
    }
    for (int j = 3; j >= 0; --j) {
      const auto bit = static_cast<Bit>((nibble >> j) & 1U);
      if (bits.size() < length) {
        bits.push_back(bit);
      } else if (bit) {
        throw ParseError("hex string has non-zero padding bits");
      }
    }
  }
  return bits;
}

std::string to_json(const ChunkedCode& code) {
  nlohmann::ordered_json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["n"] = code.n();
  doc["num_chunks"] = code.num_chunks();
  doc["chunk_len"] = code.chunk_len();
  doc["num_messages"] = code.num_messages();
  doc["num_keys"] = code.num_keys();
  auto chunks = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < code.num_chunks(); ++i) {
    auto entries = nlohmann::ordered_json::array();
    for (MessageId u = 0; u < code.num_messages(); ++u) {
      for (KeyId k = 0; k < code.num_keys(); ++k) {
        entries.push_back(bits_to_hex(code.chunk(i, u, k)));
      }
    }
    chunks.push_back(std::move(entries));
  }
  doc["chunks"] = std::move(chunks);
  return doc.dump(2) + "\n";
}

ChunkedCode code_from_json(std::string_view text) {
  const nlohmann::json doc = detail::parse_json(text);
  try {
    if (doc.at("format").get<std::string>() != kFormat) {
      throw ParseError("not an advchan chunked-code document");
    }
    if (doc.at("version").get<int>() != kVersion) {
      throw ParseError("unsupported chunked-code version");
    }
    const auto n = doc.at("n").get<std::size_t>();
    const auto num_chunks = doc.at("num_chunks").get<std::size_t>();
    const auto messages = doc.at("num_messages").get<MessageId>();
    const auto keys = doc.at("num_keys").get<KeyId>();
    if (num_chunks == 0 || n % num_chunks != 0) {
      throw ParseError("n must be a multiple of num_chunks");
    }
    const std::size_t len = n / num_chunks;
    if (doc.contains("chunk_len") && doc.at("chunk_len").get<std::size_t>() != len) {
      throw ParseError("chunk_len disagrees with n / num_chunks");
    }
    const auto& chunks = doc.at("chunks");
    if (!chunks.is_array() || chunks.size() != num_chunks) {
      throw ParseError("chunks must be an array with one table per chunk");
    }
    Bits table;
    table.reserve(num_chunks * messages * keys * len);
    for (const auto& entries : chunks) {
      if (!entries.is_array() || entries.size() != static_cast<std::size_t>(messages) * keys) {
        throw ParseError("each chunk table needs num_messages * num_keys entries");
      }
      for (const auto& e : entries) {
        const Bits bits = hex_to_bits(e.get<std::string>(), len);
        table.insert(table.end(), bits.begin(), bits.end());
      }
    }
    return ChunkedCode(n, num_chunks, messages, keys, std::move(table));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("chunked-code document: ") + e.what());
  }
}

}  // namespace advchan::codes
