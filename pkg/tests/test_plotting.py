from genramsey.plotting import plot_arrows_trace, plot_prime_scan
from genramsey.prime_encodings import PrimeTable, ap_ramsey, zhang_ramsey_scan
from genramsey.ramsey_engine import classical_instance, ramsey_number

PNG = b"\x89PNG\r\n\x1a\n"


def test_arrows_trace_figure(tmp_path):
    rep = ramsey_number(*classical_instance([3, 3]), horizon=7)
    out = plot_arrows_trace(rep, tmp_path / "r33.png")
    assert out.read_bytes()[:8] == PNG
    # the JSON form renders the same way
    plot_arrows_trace(rep.to_json(), tmp_path / "r33_json.png")
    assert (tmp_path / "r33_json.png").read_bytes() == out.read_bytes()


def test_prime_figures(tmp_path):
    T = PrimeTable(5000)
    rep = ap_ramsey(3, 6, 1, 10, T)
    assert plot_arrows_trace(rep, tmp_path / "ap.svg").read_text().lstrip().startswith("<?xml")
    rows = zhang_ramsey_scan(4, 2, 20, T)
    assert plot_prime_scan(rows, tmp_path / "scan.png").stat().st_size > 1000
