import http.server
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mutascan.errors import (
    EmptyInput,
    EmptyRecord,
    IllegalResidue,
    MalformedHeader,
    ParseError,
    RemoteError,
    TransportError,
)
from mutascan.seqio import Alphabet, Sequence, fetch_reference, parse_fasta, write_fasta


def test_parse_basic_record():
    [s] = parse_fasta(">s1 ref\nACGT\nACGT")
    assert s == Sequence("s1", "ACGTACGT", Alphabet.DNA, "ref")


def test_star_forces_protein():
    [s] = parse_fasta(">p\nMK*\n")
    assert s.residues == "MK*"
    assert s.alphabet is Alphabet.PROTEIN


def test_missing_header():
    with pytest.raises(MalformedHeader):
        parse_fasta("ACGT")


@pytest.mark.parametrize("text", ["", "\n\n", "   \n"])
def test_empty_input(text):
    with pytest.raises(EmptyInput):
        parse_fasta(text)


def test_empty_record():
    with pytest.raises(EmptyRecord):
        parse_fasta(">a\n>b\nACGT\n")


def test_illegal_residue_reports_line():
    with pytest.raises(IllegalResidue) as info:
        parse_fasta(">a\nACGT\nAC1T\n")
    assert info.value.line == 3
    assert info.value.char == "1"


def test_ambiguity_code_rejected_in_dna():
    # B is neither a nucleotide nor one of the 20 amino acids
    with pytest.raises(IllegalResidue):
        parse_fasta(">a\nACGB\n")


def test_lowercase_and_internal_whitespace():
    [s] = parse_fasta(">x  some description here\nac gt\n\tnn\n")
    assert s.residues == "ACGTNN"
    assert s.description == "some description here"


def test_rna_is_converted_and_flagged():
    [s] = parse_fasta(">r\nACGU\n")
    assert s.residues == "ACGT"
    assert s.alphabet is Alphabet.DNA
    assert s.rna_converted


def test_record_order_and_multi():
    seqs = parse_fasta(">b\nAC\n>a\nMKV\n>c\nT\n")
    assert [s.id for s in seqs] == ["b", "a", "c"]
    assert [s.alphabet for s in seqs] == [Alphabet.DNA, Alphabet.PROTEIN, Alphabet.DNA]


def test_write_wraps():
    assert write_fasta([Sequence("s1", "ACGTA")], 4) == ">s1\nACGT\nA\n"


def test_write_empty_list():
    assert write_fasta([], 10) == ""


def test_write_rejects_bad_width():
    with pytest.raises(ValueError):
        write_fasta([Sequence("s", "A")], 0)


def test_sequence_validation():
    with pytest.raises(ValueError):
        Sequence("has space", "ACGT")
    with pytest.raises(ValueError):
        Sequence("x", "")
    with pytest.raises(ValueError):
        Sequence("x", "ACGU")


_ids = st.text("abcXYZ019_.|-", min_size=1, max_size=8)
_desc = st.text("abc XYZ019=;", max_size=12).map(str.strip)
_dna = st.builds(
    lambda i, r, d: Sequence(i, r, Alphabet.DNA, d),
    _ids, st.text("ACGTN", min_size=1, max_size=80), _desc,
)
# a protein record must contain a letter outside ACGTNU to be recognised as one
_protein = st.builds(
    lambda i, r, extra, d: Sequence(i, r + extra, Alphabet.PROTEIN, d),
    _ids, st.text("ACDEFGHIKLMNPQRSTVWYX*", max_size=60), st.sampled_from("DEFHIKLMPQRSVWY*X"), _desc,
)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.one_of(_dna, _protein), min_size=1, max_size=5), st.integers(1, 90))
def test_round_trip(seqs, width):
    assert parse_fasta(write_fasta(seqs, width)) == seqs


@settings(max_examples=100, deadline=None)
@given(st.lists(st.text("ACGTacgt \t", min_size=1, max_size=40), min_size=1, max_size=6))
def test_no_residue_dropped(lines):
    text = ">x\n" + "\n".join(lines)
    expected = sum(1 for line in lines for c in line if not c.isspace())
    if expected == 0:
        with pytest.raises(EmptyRecord):
            parse_fasta(text)
        return
    [s] = parse_fasta(text)
    assert len(s) == expected


@settings(max_examples=50, deadline=None)
@given(st.text("ACGT", min_size=1, max_size=30), st.randoms())
def test_alphabet_inference_is_order_independent(residues, rnd):
    shuffled = list(residues + "K")
    rnd.shuffle(shuffled)
    assert parse_fasta(">a\n" + "".join(shuffled))[0].alphabet is Alphabet.PROTEIN
    assert parse_fasta(">a\n" + residues)[0].alphabet is Alphabet.DNA


# -- fetch ------------------------------------------------------------------


class _Handler(http.server.BaseHTTPRequestHandler):
    routes = {
        "/seq/X1": (200, ">X1 fixture\nACGT\n"),
        "/seq/P2": (200, ">P2\nACGT\n>P3\nTTTT\n"),
        "/seq/missing": (404, "not found"),
        "/seq/junk": (200, "not fasta"),
    }

    def do_GET(self):
        status, body = self.routes.get(self.path, (404, "no route"))
        data = body.encode()
        self.send_response(status)
        self.send_header("Content-Type", "text/plain")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args):
        pass


@pytest.fixture(scope="module")
def fasta_server():
    server = http.server.HTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}/seq/{{accession}}"
    server.shutdown()


def test_fetch_passthrough(fasta_server):
    s = fetch_reference("X1", fasta_server, timeout=5)
    assert s.id == "X1"
    assert s.residues == "ACGT"


def test_fetch_returns_first_record(fasta_server):
    assert fetch_reference("P2", fasta_server, timeout=5).id == "P2"


def test_fetch_404(fasta_server):
    with pytest.raises(RemoteError) as info:
        fetch_reference("missing", fasta_server, timeout=5)
    assert info.value.status == 404


def test_fetch_not_fasta(fasta_server):
    with pytest.raises(ParseError):
        fetch_reference("junk", fasta_server, timeout=5)


def test_fetch_connection_refused():
    with socket_free_port() as port:
        endpoint = f"http://127.0.0.1:{port}/{{accession}}"
    with pytest.raises(TransportError):
        fetch_reference("X1", endpoint, timeout=2)


def test_fetch_needs_placeholder():
    with pytest.raises(ValueError):
        fetch_reference("X1", "http://127.0.0.1/fixed", timeout=1)


class socket_free_port:
    """Reserve a port number and release it, leaving nothing listening there."""

    def __enter__(self):
        import socket

        self.sock = socket.socket()
        self.sock.bind(("127.0.0.1", 0))
        return self.sock.getsockname()[1]

    def __exit__(self, *exc):
        self.sock.close()
