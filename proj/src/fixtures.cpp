#include "mimocap/fixtures.hpp"

#include <initializer_list>

namespace mimocap::fixtures
{

namespace
{

using Row = std::initializer_list<Complex>;

CMatrix from_rows(std::initializer_list<Row> rows)
{
    const auto n_r = static_cast<Index>(rows.size());
    const auto n_t = static_cast<Index>(rows.begin()->size());
    CMatrix m(n_r, n_t);
    Index i = 0;
    for (const auto& row : rows)
    {
        Index j = 0;
        for (const auto& z : row)
            m(i, j++) = z;
        ++i;
    }
    return m;
}

} // namespace

CMatrix h3x4()
{
    return from_rows({
        {{-0.6490, -1.5094}, {-0.8456, -1.9654}, {-0.1969, -0.2752}},
        {{1.1812, 0.8759}, {-0.5727, -1.2701}, {0.5864, 0.6037}},
        {{-0.7585, -0.2428}, {-0.5587, 1.1752}, {-0.8519, 1.7813}},
        {{-1.1096, 0.1668}, {0.1784, 2.0292}, {0.8003, 1.7737}},
    });
}

CMatrix h3x2()
{
    return from_rows({
        {{-0.6490, -0.5587}, {-0.7585, -0.1969}, {-0.8456, -0.8519}},
        {{1.1812, 0.1784}, {-1.1096, 0.5864}, {-0.5727, 0.8003}},
    });
}

CMatrix h3x3()
{
    return from_rows({
        {{0.1038, -0.0877}, {-0.4125, -1.6836}, {1.9318, 0.2237}},
        {{-0.0410, -0.0299}, {-0.5255, -0.5724}, {-0.7740, -1.4445}},
        {{0.0074, 0.1378}, {-0.6510, 0.4731}, {1.4142, 0.8371}},
    });
}

CMatrix h4x4()
{
    return from_rows({
        {{0.3576, 0.1914}, {0.0614, 0.1692}, {-0.7338, 1.0030}, {-0.0943, -0.3671}},
        {{0.7547, 0.1277}, {0.5032, -0.2920}, {-0.4087, -1.9283}, {0.3410, -0.0309}},
        {{-0.4020, 1.1647}, {0.1404, 0.3537}, {1.6532, 3.0492}, {-0.4247, -0.0599}},
        {{0.7130, -2.0329}, {0.4724, 0.5394}, {-0.2910, 0.7012}, {-0.7934, 0.2927}},
    });
}

} // namespace mimocap::fixtures
