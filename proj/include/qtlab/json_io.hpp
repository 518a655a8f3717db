#ifndef QTLAB_JSON_IO_HPP
#define QTLAB_JSON_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtlab/scalar.hpp"
#include "qtlab/shape.hpp"
#include "qtlab/vector_matrix.hpp"

namespace qtlab {

// ordered_json keeps insertion order, so serialized output is deterministic.
using Json = nlohmann::ordered_json;

inline Json int_to_json(const Int& v) {
    // entries stay small in practice; fall back to string beyond 64 bits
    if (v >= std::numeric_limits<std::int64_t>::min() &&
        v <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(v);
    return v.str();
}

inline Int int_from_json(const Json& j) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) return Int(j.get<std::string>());
    throw std::invalid_argument("expected an integer entry");
}

inline Json rat_to_json(const Rat& v) {
    if (denominator(v) == 1) return int_to_json(numerator(v));
    return int_to_json(numerator(v)).dump() + "/" + int_to_json(denominator(v)).dump();
}

inline Json shape_to_json(const Shape& s) { return Json(s.dims()); }

inline Shape shape_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("shape must be an array");
    return Shape(j.get<std::vector<int>>());
}

inline Json matrix_to_json(const VectorMatrix& a) {
    Json j;
    j["shape"] = shape_to_json(a.shape());
    j["mode"] = a.mode() == CoefficientMode::gf2 ? "gf2" : "int";
    Json rows = Json::array();
    for (const auto& row : a.blocks()) {
        Json jrow = Json::array();
        for (const auto& blk : row) {
            Json jblk = Json::array();
            for (const Int& v : blk) jblk.push_back(int_to_json(v));
            jrow.push_back(std::move(jblk));
        }
        rows.push_back(std::move(jrow));
    }
    j["blocks"] = std::move(rows);
    return j;
}

inline VectorMatrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("shape") || !j.contains("blocks"))
        throw std::invalid_argument("matrix JSON needs \"shape\" and \"blocks\"");
    Shape shape = shape_from_json(j.at("shape"));
    CoefficientMode mode = CoefficientMode::integer;
    if (j.contains("mode")) {
        const std::string m = j.at("mode").get<std::string>();
        if (m == "gf2")
            mode = CoefficientMode::gf2;
        else if (m != "int")
            throw std::invalid_argument("mode must be \"int\" or \"gf2\"");
    }
    const Json& rows = j.at("blocks");
    if (!rows.is_array()) throw std::invalid_argument("blocks must be an array");
    VectorMatrix::Blocks blocks;
    for (const Json& jrow : rows) {
        if (!jrow.is_array()) throw std::invalid_argument("block row must be an array");
        std::vector<std::vector<Int>> row;
        for (const Json& jblk : jrow) {
            if (!jblk.is_array()) throw std::invalid_argument("block must be an array");
            std::vector<Int> blk;
            for (const Json& v : jblk) blk.push_back(int_from_json(v));
            row.push_back(std::move(blk));
        }
        blocks.push_back(std::move(row));
    }
    return VectorMatrix(std::move(shape), mode, std::move(blocks));
}

}  // namespace qtlab

#endif
