import pytest

from overpart import (
    CountTable,
    MalformedOverpartition,
    Overpartition,
    check_G_conditions,
    count_all_overpartitions,
    count_F,
    count_G,
    count_G_andrews_k0,
    product_F,
)

from conftest import gen_overpartitions


def brute_table(sys_, n_max, predicate):
    """Generate-and-filter oracle, independent of the pruned DFS."""
    entries = {(0, 0): 1}
    for n in range(1, n_max + 1):
        for parts in gen_overpartitions(n):
            op = Overpartition(parts)
            try:
                op.validate()
            except MalformedOverpartition:
                continue
            if predicate(op):
                key = (op.k, n)
                entries[key] = entries.get(key, 0) + 1
    return CountTable(n_max, entries)


class TestOverpartition:
    def test_counts_and_size(self):
        op = Overpartition([(5, True), (3, False)])
        assert op.n == 8
        assert op.k == 1

    def test_valid_equal_run(self):
        Overpartition([(6, True), (6, False)]).validate()

    @pytest.mark.parametrize("parts", [
        [(3, False), (5, False)],          # increasing
        [(6, False), (6, True)],           # overline not first in run
        [(6, True), (6, True)],            # double overline
        [(0, False)],                      # non-positive part
    ])
    def test_malformed(self, parts):
        with pytest.raises(MalformedOverpartition):
            Overpartition(parts).validate()


class TestCountAll:
    def test_fourteen_overpartitions_of_four(self):
        table = count_all_overpartitions(4)
        assert table.sum_over_k(4) == 14

    def test_empty(self):
        table = count_all_overpartitions(0)
        assert table.entries == {(0, 0): 1}

    def test_eight_overpartitions_of_three(self):
        # 3, 3~, 2+1, 2~+1, 2+1~, 2~+1~, 1+1+1, 1~+1+1
        assert count_all_overpartitions(3).sum_over_k(3) == 8

    def test_against_generate_and_filter(self):
        want = brute_table(None, 10, lambda op: True)
        assert count_all_overpartitions(10) == want


class TestCountF:
    def test_flagship_n8(self, sys7):
        table = count_F(sys7, 8)
        assert table.row(8) == [1, 2, 1]

    def test_empty_row(self, sys7):
        assert count_F(sys7, 0).entries == {(0, 0): 1}

    def test_small_system_n2(self, sys3):
        # parts congruent to 1 or 2 mod 3, so sizes 1 and 2 both enter:
        # 2~ | 2, 1~+1 | 1+1 give the k-split 1, 2, 1
        table = count_F(sys3, 2)
        assert table.row(2) == [1, 2, 1]

    def test_against_generate_and_filter(self, sys7, sys3):
        from overpart import beta
        for sys_ in (sys7, sys3):
            allowed = set(sys_.a)
            want = brute_table(
                sys_, 12,
                lambda op: all(beta(sys_, -s) in allowed
                               for s, _ in op.parts))
            assert count_F(sys_, 12) == want

    def test_matches_product_coefficients(self, battery):
        for sys_ in battery:
            table = count_F(sys_, 25)
            series = product_F(sys_, 25)
            got = {(d, e): c for e, d, c in series.terms()}
            want = {kn: c for kn, c in table.entries.items() if c}
            assert got == want


class TestCheckGConditions:
    def test_flagship_examples(self, sys7):
        ok = lambda parts: check_G_conditions(sys7, Overpartition(parts))
        assert ok([(5, False), (3, False)])
        assert ok([(5, True), (3, False)])
        assert not ok([(5, False), (3, True)])   # gap 2 < 7
        assert ok([(8, True)])
        assert not ok([(7, False), (1, False)])  # 1 < 7*(w(6)-1)

    def test_empty_is_valid(self, sys7):
        assert check_G_conditions(sys7, Overpartition([]))

    def test_equal_parts(self, sys7):
        assert check_G_conditions(
            sys7, Overpartition([(6, False), (6, False)]))
        with pytest.raises(MalformedOverpartition):
            check_G_conditions(
                sys7, Overpartition([(6, True), (6, True)]))

    def test_residue_filter(self, sys9):
        # sizes congruent to 2 or 7 mod 9 match no negated subset sum
        assert not check_G_conditions(sys9, Overpartition([(11, True)]))
        assert check_G_conditions(sys9, Overpartition([(8, True)]))


class TestCountG:
    def test_flagship_n8(self, sys7):
        assert count_G(sys7, 8).row(8) == [1, 2, 1]

    def test_overlined_largest_filter(self, sys7):
        table = count_G(sys7, 8, largest_bound=8, largest_flag="overlined")
        # 8~ at k=0 and 5~+3 at k=1
        assert table.get(0, 8) == 1
        assert table.get(1, 8) == 1
        assert table.get(2, 8) == 0

    def test_trivial_n0(self, sys7):
        for flag in (None, "overlined", "non-overlined"):
            table = count_G(sys7, 0, largest_bound=5, largest_flag=flag)
            assert table.entries == {(0, 0): 1}

    def test_bad_flag(self, sys7):
        with pytest.raises(ValueError):
            count_G(sys7, 5, largest_flag="sometimes")

    def test_against_generate_and_filter(self, battery):
        for sys_ in battery:
            want = brute_table(sys_, 12,
                               lambda op: check_G_conditions(sys_, op))
            assert count_G(sys_, 12) == want

    def test_bounded_against_generate_and_filter(self, sys7):
        for bound in (3, 6, 10):
            want = brute_table(
                sys7, 12,
                lambda op: check_G_conditions(sys7, op)
                and (not op.parts or op.parts[0][0] <= bound))
            assert count_G(sys7, 12, largest_bound=bound) == want

    def test_overline_symmetry(self, battery):
        # toggling the overline of the largest part swaps the two
        # bounded counters, shifting k by one
        for sys_ in battery:
            for bound in (4, 9, 14):
                over = count_G(sys_, 14, largest_bound=bound,
                               largest_flag="overlined")
                plain = count_G(sys_, 14, largest_bound=bound,
                                largest_flag="non-overlined")
                for n in range(1, 15):
                    for k in range(1, 16):
                        assert over.get(k - 1, n) == plain.get(k, n), \
                            (sys_.N, bound, k, n)

    def test_monotone_in_bound(self, sys7):
        prev = count_G(sys7, 15, largest_bound=0)
        for bound in range(1, 17):
            cur = count_G(sys7, 15, largest_bound=bound)
            for (k, n), c in prev.entries.items():
                assert cur.get(k, n) >= c
            prev = cur

    def test_sides_agree(self, battery):
        for sys_ in battery:
            assert count_F(sys_, 20) == count_G(sys_, 20)


class TestAndrewsK0:
    def test_flagship_n8(self, sys7):
        table = count_G_andrews_k0(sys7, 8)
        assert table.get(0, 8) == 1

    def test_n0(self, sys7):
        assert count_G_andrews_k0(sys7, 0).entries == {(0, 0): 1}

    def test_matches_k0_column(self, battery):
        for sys_ in battery:
            full = count_G(sys_, 25)
            k0 = count_G_andrews_k0(sys_, 25)
            for n in range(26):
                assert full.get(0, n) == k0.get(0, n), (sys_.N, n)


class TestCountTable:
    def test_json_shape(self, sys3):
        obj = count_G(sys3, 2).to_json_obj(sys3, "G")
        assert obj == {
            "system": {"N": 3, "a": [1, 2]},
            "n_max": 2,
            "side": "G",
            "rows": [
                {"n": 0, "by_k": ["1", "0", "0"]},
                {"n": 1, "by_k": ["1", "1", "0"]},
                {"n": 2, "by_k": ["1", "2", "1"]},
            ],
        }

    def test_first_mismatch(self):
        a = CountTable(2, {(0, 0): 1, (1, 2): 3})
        b = CountTable(2, {(0, 0): 1, (1, 2): 4})
        assert a.first_mismatch(b) == (1, 2, 3, 4)
        assert a.first_mismatch(a) is None
