#include "mimocap/channel_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mimocap/errors.hpp"

namespace mimocap
{

namespace
{

using nlohmann::json;

Index read_dim(const json& doc, const char* key)
{
    if (!doc.contains(key) || !doc[key].is_number_integer())
        throw InputError(std::string("matrix file: missing integer field '") + key + "'");
    const auto v = doc[key].get<long long>();
    if (v <= 0)
        throw InputError(std::string("matrix file: '") + key + "' must be positive");
    return static_cast<Index>(v);
}

RMatrix read_part(const json& doc, const char* key, Index rows, Index cols)
{
    const json& a = doc.at(key);
    if (!a.is_array() || static_cast<Index>(a.size()) != rows)
        throw InputError(std::string("matrix file: '") + key + "' must have " +
                         std::to_string(rows) + " rows");
    RMatrix out(rows, cols);
    for (Index i = 0; i < rows; ++i)
    {
        const json& row = a[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw InputError(std::string("matrix file: row ") + std::to_string(i) + " of '" +
                             key + "' must have " + std::to_string(cols) + " entries");
        for (Index j = 0; j < cols; ++j)
        {
            const json& x = row[static_cast<std::size_t>(j)];
            if (!x.is_number())
                throw InputError(std::string("matrix file: non-numeric entry in '") + key + "'");
            out(i, j) = x.get<double>();
            if (!std::isfinite(out(i, j)))
                throw InputError(std::string("matrix file: non-finite entry in '") + key + "'");
        }
    }
    return out;
}

} // namespace

CMatrix parse_matrix_json(std::string_view text)
{
    json doc;
    try
    {
        doc = json::parse(text.begin(), text.end());
    }
    catch (const json::parse_error& e)
    {
        throw InputError(std::string("matrix file: ") + e.what());
    }
    if (!doc.is_object())
        throw InputError("matrix file: top level must be an object");

    const Index rows = read_dim(doc, "n_r");
    const Index cols = read_dim(doc, "n_t");
    if (!doc.contains("re"))
        throw InputError("matrix file: missing field 're'");

    const RMatrix re = read_part(doc, "re", rows, cols);
    RMatrix im = RMatrix::Zero(rows, cols);
    if (doc.contains("im") && !doc["im"].is_null())
        im = read_part(doc, "im", rows, cols);

    CMatrix m(rows, cols);
    m.real() = re;
    m.imag() = im;
    return m;
}

CMatrix load_matrix_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open matrix file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix_json(buf.str());
}

std::string matrix_to_json(const CMatrix& m, int indent)
{
    json re = json::array();
    json im = json::array();
    for (Index i = 0; i < m.rows(); ++i)
    {
        json rr = json::array();
        json ri = json::array();
        for (Index j = 0; j < m.cols(); ++j)
        {
            rr.push_back(m(i, j).real());
            ri.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    json doc = {{"n_r", m.rows()}, {"n_t", m.cols()}, {"re", re}, {"im", im}};
    return doc.dump(indent);
}

} // namespace mimocap
