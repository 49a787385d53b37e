"""Acceptance gate: one test per criterion, stated tolerances, timed.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion with its runtime.
"""

import json
import math
import os
import time
from contextlib import contextmanager

import numpy as np
import pytest

from dohertylab import (
    DohertyConfig,
    ideal_efficiency,
    itr_conv,
    itr_intro,
    synth_three_line,
    synth_transformer_combiner,
    synth_two_line,
    to_netlist,
    transformer_combiner_explicit_netlist,
)
from dohertylab.analysis import (
    bandwidth_report,
    compare_passive_eff,
    drive_profile,
    itr_inverter_oracle,
    load_modulation,
    offset_delivered_power,
    peak_excitations,
    required_phase_offset,
    simulate_pa,
)
from dohertylab.cells import ideal_doherty_cells
from dohertylab.cli import main as cli_main
from dohertylab.netkit import (
    Netlist,
    Resistor,
    TransmissionLine,
    read_touchstone,
    s_parameters,
    write_touchstone,
)

PROTO = DohertyConfig(alpha=1.0, r_opt=41.3, r_l=50.0, f0=37e9)
SIX_DB = 20.0 * math.log10(2.0)


@contextmanager
def criterion(num, name, limit_s):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {num} [{name}]: FAIL ({time.perf_counter() - t0:.2f} s)")
        raise
    dt = time.perf_counter() - t0
    assert dt < limit_s, f"criterion {num} runtime {dt:.2f}s exceeds {limit_s}s"
    print(f"\nACCEPTANCE {num} [{name}]: PASS ({dt:.2f} s)")


def test_criterion_1_itr_anchors():
    with criterion(1, "ITR anchors", 1.0):
        assert abs(itr_intro(1.0, 1.0, 41.3, 50.0) - 2.42) <= 0.01
        assert abs(itr_intro(1.0, 0.583, 41.3, 50.0) - 1.00) <= 0.01
        assert abs(itr_intro(1.0, 0.5, 41.3, 50.0) - 1.65) <= 0.01
        for alpha in (0.5, 1.0, 2.0):
            peak = 2.0 / (1.0 + alpha)
            second = 2.0 / (1.0 + alpha) ** 2
            assert abs(itr_conv(alpha, peak) - 1.0) < 1e-9
            assert abs(itr_conv(alpha, second) - (1.0 + alpha) ** 2) < 1e-9 * (
                1.0 + alpha
            ) ** 2
        assert abs(itr_conv(1.0, 0.5) - 4.0) < 1e-9


def test_criterion_2_oracle_equivalence():
    with criterion(2, "closed-form vs MNA inverter ratio", 5.0):
        for alpha in (0.5, 1.0, 2.0):
            cfg = DohertyConfig(alpha=alpha, r_opt=41.3, r_l=50.0, f0=37e9)
            grid = np.linspace(cfg.i_main_turn_on, cfg.i_main_max, 50)
            measured, formula = itr_inverter_oracle(synth_two_line(cfg), grid)
            assert np.max(np.abs(measured - formula) / formula) < 0.005
        grid = np.linspace(0.5, 1.0, 50)
        measured, formula = itr_inverter_oracle(synth_three_line(PROTO), grid)
        assert np.max(np.abs(measured - formula) / formula) < 0.005
        measured, formula = itr_inverter_oracle(synth_transformer_combiner(PROTO), grid)
        assert np.max(np.abs(measured - formula) / formula) < 0.005


def test_criterion_3_synthesis_identities():
    with criterion(3, "synthesis identities", 10.0):
        rng = np.random.default_rng(2024)
        # 1000 random valid configs across the three topologies
        for _ in range(400):
            cfg = DohertyConfig(
                alpha=1.0,
                r_opt=rng.uniform(5.0, 200.0),
                r_l=rng.uniform(10.0, 100.0),
                f0=rng.uniform(0.5e9, 100e9),
            )
            d = synth_transformer_combiner(
                cfg,
                n1=rng.uniform(0.3, 3.0),
                k1=rng.uniform(0.25, 0.95),
                n2=rng.uniform(0.3, 3.0),
            )
            assert max(d.identity_residuals.values()) < 1e-9
        for _ in range(300):
            cfg = DohertyConfig(
                alpha=rng.uniform(0.2, 4.0),
                r_opt=rng.uniform(5.0, 200.0),
                r_l=rng.uniform(10.0, 100.0),
                f0=rng.uniform(0.5e9, 100e9),
            )
            assert max(synth_two_line(cfg).identity_residuals.values()) < 1e-9
            assert max(synth_three_line(cfg).identity_residuals.values()) < 1e-9

        # k2 in (0,1) for 1e4 random (n2, r_opt/r_l) pairs
        n2s = rng.uniform(0.2, 5.0, 10_000)
        ratios = rng.uniform(0.05, 20.0, 10_000)
        s = np.sqrt(ratios / 2.0)
        k2 = (np.sqrt(n2s**2 * s**2 + 4.0) - n2s * s) / 2.0
        assert np.all(k2 > 0.0) and np.all(k2 < 1.0)
        # spot-check the vectorized values against the synthesizer
        for idx in rng.integers(0, 10_000, 25):
            cfg = DohertyConfig(alpha=1.0, r_opt=50.0 * ratios[idx], r_l=50.0, f0=10e9)
            d = synth_transformer_combiner(cfg, n1=1.0, k1=0.7, n2=float(n2s[idx]))
            assert d.k2 == pytest.approx(float(k2[idx]), rel=1e-12)

        # equal turn ratios give exactly equal primary inductances
        for _ in range(100):
            n = rng.uniform(0.3, 3.0)
            cfg = DohertyConfig(
                alpha=1.0,
                r_opt=rng.uniform(5.0, 200.0),
                r_l=rng.uniform(10.0, 100.0),
                f0=20e9,
            )
            d = synth_transformer_combiner(cfg, n1=n, k1=rng.uniform(0.3, 0.9), n2=n)
            assert d.l_p1 == d.l_p2


def test_criterion_4_network_synthesis_equivalence():
    with criterion(4, "explicit vs coupled-pair network, load modulation", 10.0):
        design = synth_transformer_combiner(PROTO, n1=1.0, k1=0.7, n2=1.0)
        net_tf = to_netlist(design, include_load=False)
        net_exp = transformer_combiner_explicit_netlist(design, include_load=False)
        freqs = np.linspace(0.6 * PROTO.f0, 1.4 * PROTO.f0, 201)
        s_tf = s_parameters(net_tf, ["main", "aux", "load"], freqs, 50.0)
        s_exp = s_parameters(net_exp, ["main", "aux", "load"], freqs, 50.0)
        assert np.abs(s_tf - s_exp).max() <= 1e-9

        net = to_netlist(design)
        prof = drive_profile(PROTO, net, n_points=21, i_main_min=0.5)
        sweep = load_modulation(net, PROTO, prof)
        target = PROTO.r_opt / prof.i_main
        assert np.max(np.abs(sweep.z_main.real - target) / target) < 0.005
        assert np.max(np.abs(sweep.z_main.imag)) < 0.01 * PROTO.z_main_peak
        on = prof.i_aux > 0
        assert np.max(np.abs(sweep.z_aux[on].imag)) < 0.01 * PROTO.z_main_peak


def test_criterion_5_ideal_efficiency():
    with criterion(5, "ideal efficiency peaks and enhancement ratios", 5.0):
        net = to_netlist(synth_two_line(PROTO))
        main, aux = ideal_doherty_cells(PROTO, v_dc=1.0)
        grid = np.sort(np.append(np.linspace(0.05, 1.0, 96), 0.5))
        sim = simulate_pa(main, aux, net, grid, v_dc=1.0)
        eta_peak = sim.eta[-1]
        eta_6db = sim.eta_at_pbo(SIX_DB)
        assert abs(eta_peak - math.pi / 4.0) <= 0.001  # 0.1 pp
        assert abs(eta_6db - math.pi / 4.0) <= 0.001

        enh_b = eta_6db / ideal_efficiency("class-b", SIX_DB)
        enh_a = eta_6db / ideal_efficiency("class-a", SIX_DB)
        assert abs(enh_b - 2.00) <= 0.02
        assert abs(enh_a - 6.28) <= 0.0628
        print(
            "\n  note: hardware-measured enhancement ratios (e.g. 1.92x/3.86x "
            "over class-B/class-A) include driver and device losses and are "
            "non-targets; the ideal-model ratios are 2.00x/6.28x"
        )


def test_criterion_6_loss_and_bandwidth_orderings():
    with criterion(6, "loss and bandwidth orderings at Q=20", 30.0):
        q = 20.0
        net_tf = to_netlist(synth_transformer_combiner(PROTO), q_l=q, q_c=q)
        net_2l = to_netlist(synth_two_line(PROTO), q_l=q, q_c=q, implementation="lumped-pi")

        pbo, eta_tf, eta_2l = compare_passive_eff(net_tf, net_2l, PROTO, 3, i_main_min=0.5)
        assert abs(pbo[0] - SIX_DB) < 1e-9
        assert eta_tf[0] > eta_2l[0]  # strictly better at 6 dB back-off

        bw = {}
        for name, net in (("tf", net_tf), ("2l", net_2l)):
            prof = drive_profile(PROTO, net, n_points=2)
            exc = peak_excitations(PROTO, prof)
            bw[name] = bandwidth_report(net, exc, "passive-efficiency", 1.0).fractional
        assert bw["tf"] >= bw["2l"]

        def match_bw(itr_ratio):
            net = Netlist(f0=37e9)
            net.add("TL1", TransmissionLine(50.0, 90.0, 37e9), "main", "out")
            net.add("RL", Resistor(50.0 * math.sqrt(itr_ratio)), "out", "0")
            net.add_port("main", "main")
            net.add_port("load", "out")
            net.load_port = "load"
            return bandwidth_report(
                net, {"main": 1.0}, "load-match", 10.0, window=0.9, n_points=401
            ).fractional

        bws = [match_bw(r) for r in (1.0, 2.0, 4.0)]
        assert bws[0] > bws[1] > bws[2]


def test_criterion_7_phase_offsets():
    with criterion(7, "required phase offsets", 5.0):
        sym = Netlist(f0=1e9)
        sym.add("Ra", Resistor(50.0), "main", "out")
        sym.add("Rb", Resistor(50.0), "aux", "out")
        sym.add("RL", Resistor(25.0), "out", "0")
        sym.add_port("main", "main")
        sym.add_port("aux", "aux")
        sym.add_port("load", "out")
        sym.load_port = "load"
        assert abs(required_phase_offset(sym)) < 1e-9

        net3 = to_netlist(synth_three_line(PROTO))
        net_tf = to_netlist(synth_transformer_combiner(PROTO))
        off3 = required_phase_offset(net3)
        off_tf = required_phase_offset(net_tf)
        assert abs(off3 - (-90.0)) <= 0.5
        assert abs(off_tf - 90.0) <= 0.5

        for net, off in ((net3, off3), (net_tf, off_tf), (sym, 0.0)):
            p0 = offset_delivered_power(net, off)
            assert offset_delivered_power(net, off + 1.0) < p0
            assert offset_delivered_power(net, off - 1.0) < p0


def test_criterion_8_file_formats(tmp_path, capsys):
    with criterion(8, "file round-trips and CLI exit codes", 5.0):
        design_doc = {
            "config": {"alpha": 1.0, "r_opt_ohm": 41.3, "r_l_ohm": 50.0, "f0_hz": 37.0e9},
            "topology": "transformer",
            "free_params": {"n1": 1.0, "k1": 0.7, "n2": 1.0},
        }
        design_path = tmp_path / "design.json"
        design_path.write_text(json.dumps(design_doc))

        # byte-stable synth outputs
        out_a, out_b = str(tmp_path / "a"), str(tmp_path / "b")
        assert cli_main(["synth", str(design_path), "--out-dir", out_a]) == 0
        assert cli_main(["synth", str(design_path), "--out-dir", out_b]) == 0
        for name in ("report.json", "netlist.json", "combiner.s3p"):
            with open(os.path.join(out_a, name), "rb") as fa:
                with open(os.path.join(out_b, name), "rb") as fb:
                    assert fa.read() == fb.read()

        # Touchstone numeric round-trip within 1e-9 and byte-stable re-render
        net = Netlist.from_json_dict(
            json.loads(open(os.path.join(out_a, "netlist.json")).read())
        )
        freqs = np.linspace(0.6 * net.f0, 1.4 * net.f0, 51)
        s = s_parameters(net, ["main", "aux", "load"], freqs, 50.0)
        text = write_touchstone(freqs, s, 50.0)
        back = read_touchstone(text)
        assert np.abs(back.s - s).max() <= 1e-9
        assert write_touchstone(back.freqs_hz, back.s, back.z_ref) == text

        # netlist JSON round-trip is exact
        doc = net.to_json_dict()
        assert Netlist.from_json_dict(doc).to_json_dict() == doc

        # CSV determinism
        for d in ("c1", "c2"):
            assert (
                cli_main(
                    [
                        "analyze",
                        "--mode",
                        "itr-curves",
                        "--alpha",
                        "1",
                        "--r-opt",
                        "41.3",
                        "--r-l",
                        "50",
                        "--out-dir",
                        str(tmp_path / d),
                    ]
                )
                == 0
            )
        assert (tmp_path / "c1" / "itr_curves.csv").read_bytes() == (
            tmp_path / "c2" / "itr_curves.csv"
        ).read_bytes()

        # malformed-input corpus honors the exit-code contract
        corpus = [
            "{not json",
            json.dumps({"topology": "transformer"}),  # missing config
            json.dumps({**design_doc, "topology": "ring"}),
            json.dumps({**design_doc, "bogus": 1}),
            json.dumps(
                {**design_doc, "config": {**design_doc["config"], "alpha": -2.0}}
            ),
            json.dumps({**design_doc, "free_params": {"k1": 7.0}}),
        ]
        for k, text in enumerate(corpus):
            bad = tmp_path / f"bad{k}.json"
            bad.write_text(text)
            code = cli_main(["synth", str(bad), "--out-dir", str(tmp_path / "junk")])
            err = capsys.readouterr().err
            assert code == 2, text
            assert json.loads(err)["code"] == 2

        # 5-port export request refused
        code = cli_main(
            [
                "export",
                os.path.join(out_a, "netlist.json"),
                "--touchstone",
                str(tmp_path / "x.s5p"),
                "--ports",
                "a,b,c,d,e",
            ]
        )
        capsys.readouterr()
        assert code == 2
