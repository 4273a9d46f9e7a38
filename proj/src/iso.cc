#include <dpoly/iso.hh>

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>

namespace dpoly
{
    namespace
    {
        void put_u32(std::ostream & out, std::uint32_t v)
        {
            char b[4];
            for (int i = 0; i < 4; ++i)
                b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
            out.write(b, 4);
        }

        auto get_u32(std::istream & in) -> std::uint32_t
        {
            unsigned char b[4];
            if (! in.read(reinterpret_cast<char *>(b), 4))
                throw ParseError("truncated flag file header", 0);
            return b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t{b[3]} << 24);
        }

        auto non_identity_actions(int n) -> std::vector<PermutationAction>
        {
            std::vector<PermutationAction> result;
            for (auto & p : all_permutations(n))
                if (! p.is_identity())
                    result.emplace_back(p);
            return result;
        }
    }

    ClassFlags::ClassFlags(int n) :
        _n(n),
        _size(digraph_count(n)),
        _words((_size + 63) / 64, 0)
    {
    }

    auto ClassFlags::representative_count() const -> std::uint64_t
    {
        std::uint64_t copies = 0;
        for (auto w : _words)
            copies += std::popcount(w);
        return _size - copies;
    }

    auto ClassFlags::representatives() const -> std::vector<DigraphIndex>
    {
        std::vector<DigraphIndex> result;
        for (std::uint64_t k = 0; k < _size; ++k)
            if (! is_copy(k))
                result.push_back({k});
        return result;
    }

    void ClassFlags::write(std::ostream & out) const
    {
        put_u32(out, static_cast<std::uint32_t>(_n));
        put_u32(out, static_cast<std::uint32_t>(representative_count()));
        std::vector<char> bytes((_size + 7) / 8, 0);
        for (std::uint64_t k = 0; k < _size; ++k)
            if (is_copy(k))
                bytes[k / 8] = static_cast<char>(bytes[k / 8] | (1 << (k % 8)));
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }

    auto ClassFlags::read(std::istream & in) -> ClassFlags
    {
        auto n = static_cast<int>(get_u32(in));
        auto count = get_u32(in);
        ClassFlags flags(n);
        std::vector<char> bytes((flags._size + 7) / 8);
        if (! in.read(bytes.data(), static_cast<std::streamsize>(bytes.size())))
            throw ParseError("truncated flag file body", 0);
        for (std::uint64_t k = 0; k < flags._size; ++k)
            if ((static_cast<unsigned char>(bytes[k / 8]) >> (k % 8)) & 1u)
                flags.set_copy(k);
        if (flags.representative_count() != count)
            throw ParseError("flag file header count does not match body", 0);
        return flags;
    }

    PermutationAction::PermutationAction(const VertexPermutation & p) :
        _bit_count(p.size() * p.size())
    {
        int n = p.size();
        // Source bit of edge (i,j) moves to the bit of edge (p(i),p(j)).
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                _target[_bit_count - 1 - (i * n + j)] = static_cast<std::uint8_t>(_bit_count - 1 - (p[i] * n + p[j]));
    }

    auto PermutationAction::apply(DigraphIndex k) const noexcept -> DigraphIndex
    {
        std::uint64_t in = k.value, out = 0;
        while (in) {
            int b = std::countr_zero(in);
            in &= in - 1;
            out |= std::uint64_t{1} << _target[b];
        }
        return {out};
    }

    auto dedupe_bruteforce(int n) -> ClassFlags
    {
        ClassFlags flags(n);
        auto actions = non_identity_actions(n);

        std::vector<std::vector<std::uint64_t>> by_edges(n * n + 1);
        for (std::uint64_t k = 0; k < flags.size(); ++k)
            by_edges[std::popcount(k)].push_back(k);

        std::vector<std::uint64_t> images;
        for (auto & bucket : by_edges) {
            for (std::size_t a = 0; a < bucket.size(); ++a) {
                auto leader = bucket[a];
                if (flags.is_copy(leader))
                    continue;

                images.clear();
                for (auto & act : actions)
                    images.push_back(act.apply({leader}).value);
                std::sort(images.begin(), images.end());

                for (std::size_t b = a + 1; b < bucket.size(); ++b) {
                    auto other = bucket[b];
                    if (! flags.is_copy(other) && std::binary_search(images.begin(), images.end(), other))
                        flags.set_copy(other);
                }
            }
        }
        return flags;
    }

    auto dedupe_sieve(int n) -> ClassFlags
    {
        ClassFlags flags(n);
        auto actions = non_identity_actions(n);
        for (std::uint64_t k = 0; k < flags.size(); ++k) {
            if (flags.is_copy(k))
                continue;
            for (auto & act : actions) {
                auto image = act.apply({k}).value;
                if (image > k)
                    flags.set_copy(image);
            }
        }
        return flags;
    }

    auto canonical_index(const Digraph & g) -> DigraphIndex
    {
        auto best = g.index();
        for (auto & p : all_permutations(g.vertex_count()))
            best = std::min(best, PermutationAction(p).apply(g.index()));
        return best;
    }
}
