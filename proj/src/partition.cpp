#include "genverify/partition.hpp"

#include "genverify/error.hpp"

#include <charconv>
#include <cmath>

namespace gv {

Partition::Partition(std::vector<Axis> axes, std::vector<std::size_t> counts)
    : _axes(std::move(axes)), _counts(std::move(counts))
{
    if (_axes.empty())
        throw Error("partition needs at least one axis");
    if (_axes.size() != _counts.size())
        throw Error("partition has " + std::to_string(_axes.size()) + " axes but "
                    + std::to_string(_counts.size()) + " grid counts");
    _size = 1;
    for (std::size_t a = 0; a < _axes.size(); ++a) {
        const auto &axis = _axes[a];
        if (_counts[a] < 1)
            throw Error("grid count for '" + axis.name + "' must be at least 1");
        if (!axis.range.is_finite() || !(axis.range.lo < axis.range.hi))
            throw Error("axis '" + axis.name + "' has a degenerate range " + to_string(axis.range));
        std::vector<double> b(_counts[a] + 1);
        const double n = static_cast<double>(_counts[a]);
        for (std::size_t i = 0; i < _counts[a]; ++i)
            b[i] = axis.range.lo + (axis.range.hi - axis.range.lo) * (static_cast<double>(i) / n);
        b.back() = axis.range.hi;
        _bounds.push_back(std::move(b));
        _size *= _counts[a];
    }
}

std::vector<std::size_t> Partition::grid_index(std::size_t flat) const
{
    if (flat >= _size)
        throw Error("cell " + std::to_string(flat) + " out of range");
    std::vector<std::size_t> index(_axes.size());
    for (std::size_t a = _axes.size(); a-- > 0;) {
        index[a] = flat % _counts[a];
        flat /= _counts[a];
    }
    return index;
}

std::size_t Partition::flat_index(const std::vector<std::size_t> &index) const
{
    if (index.size() != _axes.size())
        throw Error("grid index has wrong arity");
    std::size_t flat = 0;
    for (std::size_t a = 0; a < _axes.size(); ++a) {
        if (index[a] >= _counts[a])
            throw Error("grid index out of range on axis '" + _axes[a].name + "'");
        flat = flat * _counts[a] + index[a];
    }
    return flat;
}

Cell Partition::cell(std::size_t flat) const
{
    Cell c;
    c.index = grid_index(flat);
    for (std::size_t a = 0; a < _axes.size(); ++a)
        c.bounds.push_back({_bounds[a][c.index[a]], _bounds[a][c.index[a] + 1]});
    return c;
}

std::vector<Cell> Partition::cells() const
{
    std::vector<Cell> out;
    out.reserve(_size);
    for (std::size_t i = 0; i < _size; ++i)
        out.push_back(cell(i));
    return out;
}

Partition build_partition(std::vector<Axis> domain, std::vector<std::size_t> counts)
{
    return Partition(std::move(domain), std::move(counts));
}

namespace {

std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

} // namespace

double parse_number(const std::string &text)
{
    const std::string t = trim(text);
    const char *begin = t.data();
    if (!t.empty() && *begin == '+')
        ++begin;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(value))
        throw Error("malformed number '" + text + "'");
    return value;
}

std::vector<Axis> parse_ranges(const std::string &text)
{
    std::vector<Axis> axes;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find(';', pos);
        if (end == std::string::npos)
            end = text.size();
        const std::string item = trim(text.substr(pos, end - pos));
        pos = end + 1;
        if (item.empty())
            continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Error("range '" + item + "' is not of the form name=[lo,hi]");
        Axis axis;
        axis.name = trim(item.substr(0, eq));
        const std::string body = trim(item.substr(eq + 1));
        if (axis.name.empty() || body.size() < 2 || body.front() != '[' || body.back() != ']')
            throw Error("range '" + item + "' is not of the form name=[lo,hi]");
        const auto comma = body.find(',');
        if (comma == std::string::npos)
            throw Error("range '" + item + "' is missing a comma");
        axis.range.lo = parse_number(body.substr(1, comma - 1));
        axis.range.hi = parse_number(body.substr(comma + 1, body.size() - comma - 2));
        if (!(axis.range.lo < axis.range.hi))
            throw Error("range '" + item + "' must have lo < hi");
        axis.latent = axis.name.front() == 'z' || axis.name.front() == 'Z';
        for (const auto &other : axes)
            if (other.name == axis.name)
                throw Error("duplicate range for '" + axis.name + "'");
        axes.push_back(std::move(axis));
    }
    if (axes.empty())
        throw Error("no ranges given");
    return axes;
}

std::vector<std::size_t> parse_grid(const std::string &text)
{
    std::vector<std::size_t> counts;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find_first_of("xX", pos);
        if (end == std::string::npos)
            end = text.size();
        const std::string item = trim(text.substr(pos, end - pos));
        std::size_t value = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() || value == 0)
            throw Error("malformed grid '" + text + "'");
        counts.push_back(value);
        pos = end + 1;
    }
    return counts;
}

} // namespace gv
