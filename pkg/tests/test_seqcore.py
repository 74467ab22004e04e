import numpy as np
import pytest

from anqie.seqcore import (Alphabet, DataError, NumericSequence,
                           SymbolicSequence, joint, load_sequence, recode,
                           save_raw_bytes, save_sequence, shift)


def test_alphabet_rejects_duplicates():
    with pytest.raises(DataError):
        Alphabet((0, 1, 0))


def test_alphabet_distinguishes_signed_zero():
    a = Alphabet((0.0, -0.0))
    assert a.size == 2


def test_alphabet_rejects_bool_labels():
    with pytest.raises(DataError):
        Alphabet((True, False))


def test_from_labels_first_occurrence_order():
    s = SymbolicSequence.from_labels(["b", "a", "b", "c", "a"])
    assert s.alphabet.values == ("b", "a", "c")
    assert s.symbols.tolist() == [0, 1, 0, 2, 1]
    assert s.labels() == ["b", "a", "b", "c", "a"]


def test_symbols_read_only():
    s = SymbolicSequence.from_labels([0, 1, 0])
    with pytest.raises(ValueError):
        s.symbols[0] = 1


def test_symbol_out_of_range_rejected():
    with pytest.raises(DataError):
        SymbolicSequence(Alphabet((0, 1)), np.array([0, 2], dtype=np.int32))


def test_numeric_requires_finite():
    with pytest.raises(DataError):
        NumericSequence(np.array([1.0, np.nan], dtype=np.complex128))


def test_numeric_bound():
    v = NumericSequence(np.array([1 + 1j, -2.0, 0.5j]))
    assert v.bound == pytest.approx(2.0)
    assert v.n == 3


def test_shift_drops_prefix():
    s = SymbolicSequence.from_labels([3, 1, 4, 1, 5])
    t = shift(s, 2)
    assert t.labels() == [4, 1, 5]
    assert shift(s, 0) is s
    with pytest.raises(DataError):
        shift(s, 5)
    with pytest.raises(DataError):
        shift(s, -1)


def test_recode_with_dict_and_callable():
    s = SymbolicSequence.from_labels([0, 1, 2, 1])
    t = recode(s, {0: "x", 1: "y", 2: "x"})
    assert t.labels() == ["x", "y", "x", "y"]
    u = recode(s, lambda v: v % 2)
    assert u.labels() == [0, 1, 0, 1]


def test_recode_injective_keeps_index_array():
    s = SymbolicSequence.from_labels([2, 0, 1, 0])
    t = recode(s, lambda v: v + 10)
    assert np.array_equal(s.symbols, t.symbols)
    assert t.alphabet.values == (12, 10, 11)


def test_recode_dict_missing_label():
    s = SymbolicSequence.from_labels([0, 1])
    with pytest.raises(DataError):
        recode(s, {0: "x"})


def test_joint_pairs_and_alphabet_order():
    f = SymbolicSequence.from_labels([0, 1, 0, 1])
    g = SymbolicSequence.from_labels(["a", "a", "b", "b"])
    j = joint([f, g])
    assert j.alphabet.values == ((0, "a"), (1, "a"), (0, "b"), (1, "b"))
    assert j.as_symbolic().labels() == [(0, "a"), (1, "a"), (0, "b"), (1, "b")]


def test_joint_length_mismatch():
    f = SymbolicSequence.from_labels([0, 1])
    g = SymbolicSequence.from_labels([0])
    with pytest.raises(DataError):
        joint([f, g])


def test_tokens_round_trip(tmp_path):
    s = SymbolicSequence.from_labels([1.5, -0.0, 1.5, 2.25])
    p = tmp_path / "seq.txt"
    save_sequence(s, p)
    t = load_sequence(p, "tokens")
    assert t.labels() == s.labels()
    assert t.alphabet.values == s.alphabet.values


def test_tokens_without_sidecar_parses_ints(tmp_path):
    p = tmp_path / "seq.txt"
    p.write_text("5\n3\n5\n")
    s = load_sequence(p, "tokens")
    assert s.labels() == [5, 3, 5]


def test_tokens_bad_token_against_sidecar(tmp_path):
    s = SymbolicSequence.from_labels([0, 1])
    p = tmp_path / "seq.txt"
    save_sequence(s, p)
    p.write_text("0\n7\n")
    with pytest.raises(DataError) as ei:
        load_sequence(p, "tokens")
    assert ":2:" in str(ei.value)


def test_csv_complex_round_trip(tmp_path):
    v = NumericSequence(np.array([0.1 + 0.2j, -3.0, 0.0 + 1e-17j]))
    p = tmp_path / "vals.csv"
    save_sequence(v, p)
    w = load_sequence(p, "csv-complex")
    assert np.array_equal(v.values, w.values)


def test_csv_complex_rejects_bad_header(tmp_path):
    p = tmp_path / "vals.csv"
    p.write_text("x,y\n1,2\n")
    with pytest.raises(DataError):
        load_sequence(p, "csv-complex")


def test_raw_bytes_round_trip(tmp_path):
    s = SymbolicSequence.from_labels([65, 66, 65, 67])
    p = tmp_path / "seq.bin"
    save_raw_bytes(s, p)
    t = load_sequence(p, "raw-bytes")
    assert t.labels() == s.labels()


def test_empty_input_rejected(tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text("")
    with pytest.raises(DataError) as ei:
        load_sequence(p, "tokens")
    assert "empty" in str(ei.value)


def test_missing_file_rejected(tmp_path):
    with pytest.raises(DataError):
        load_sequence(tmp_path / "nope.txt", "tokens")
