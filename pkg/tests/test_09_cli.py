import math

import pytest

from gausslab.main import main
from gausslab.services.sweep_service import SweepSummary


def test_cubic_command_aligned_cubic(run_cli):
    code, report, _ = run_cli("example1", "--a", "0", "--b", "1", "--c", "0")
    assert code == 0
    assert report["command"] == "example1"
    assert report["verdict"] == "pass"
    assert report["details"]["contained"] is True
    assert report["details"]["regime"] == "complex-critical"
    imag_parts = sorted(im for _, im in report["details"]["critical_points"])
    assert imag_parts == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)])


def test_cubic_command_real_regime_is_inconclusive(run_cli):
    code, report, _ = run_cli("cubic", "--a", "0", "--b", "1", "--c", "2")
    assert code == 3
    assert report["details"]["within_premise"] is False
    assert report["details"]["contained"] is True


def test_quadratic_command(run_cli):
    code, report, _ = run_cli("example1-quad", "--r1", "0", "--r2", "1+i")
    assert code == 0
    assert report["details"]["contained"] is False
    assert report["details"]["components"] == 2


def test_check_gl_passes(run_cli):
    code, report, _ = run_cli("check-gl", "--poly", "(z1-2)*(z1^2+1)")
    assert code == 0
    assert report["verdict"] == "pass"
    assert report["counts"] == {"pass": 2, "fail": 0, "degenerate": 0}
    assert len(report["witnesses"]) == 2


def test_stability_command_reports_a_certified_witness(run_cli):
    code, report, _ = run_cli("check-t2", "--poly", "z1*z2 + 1", "--theta", "0,0", "--trials", "1000")
    assert code == 1
    assert report["details"]["outcome"] == "hypothesis-violated"
    (witness,) = report["witnesses"]
    assert len(witness["point"]) == 2
    assert all(im > 0 for _, im in witness["point"])
    assert report["seed"] == 0


def test_stability_command_skips_null_partial(run_cli):
    code, report, _ = run_cli("check-stability", "--poly", "z2 + i", "--theta", "0,0", "--trials", "50")
    assert code == 3
    assert report["details"]["outcome"] == "skipped"


def test_section_command_point_and_section_modes(run_cli):
    code, report, _ = run_cli("check-t1", "--poly", "z1^2 + z2^2", "--k", "1", "--at", "0; 1")
    assert code == 0
    assert report["counts"]["pass"] == 1

    code, report, _ = run_cli("check-section", "--poly", "z1^3 + z2", "--others", "2")
    assert code == 0
    assert report["details"]["critical_points"] == 2

    code, report, _ = run_cli("check-t1", "--poly", "z1*z2", "--at", "5; 0")
    assert code == 3
    assert report["counts"]["degenerate"] == 1


def test_section_command_precondition_errors_exit_2(run_cli):
    code, _, err = run_cli("check-t1", "--poly", "z2^2 + 1", "--at", "0; 1")
    assert code == 2
    assert "hypothesis violated" in err

    code, _, err = run_cli("check-t1", "--poly", "z1^2 + z2^2", "--at", "1; 1")
    assert code == 2


def test_complement_convexity_command(run_cli):
    code, report, _ = run_cli("check-lemma1", "--theta", "0,0", "--fixed", "i", "--samples", "500")
    assert code == 0
    assert report["details"]["case"] == "half-plane"
    assert report["details"]["c"] == pytest.approx(1.0)

    code, report, _ = run_cli("check-complement", "--theta", "0.3", "--samples", "200")
    assert code == 0
    assert report["details"]["c"] is None


def test_polynomial_commands(run_cli):
    code, report, _ = run_cli("roots", "--poly", "z1^2 + 1")
    assert code == 0
    assert sorted(im for _, im in report["details"]["roots"]) == pytest.approx([-1, 1])

    code, report, _ = run_cli("restrict", "--poly", "z1^2 + z2^2", "--k", "1", "--others", "2i")
    assert code == 0
    assert report["details"]["coefficients"] == [[-4, 0], [0, 0], [1, 0]]
    assert report["details"]["expression"] == "z1^2 - 4"

    code, report, _ = run_cli("diff", "--poly", "z1^2*z2", "--k", "2")
    assert report["details"]["expression"] == "z1^2"


def test_geometry_commands(run_cli):
    code, report, _ = run_cli("hull", "--points", "0; 2; 1+i", "--at", "1+0.5i")
    assert code == 0
    assert report["details"]["classified"] == ["inside"]

    code, _, _ = run_cli("hull", "--points", "0; 2; 1+i", "--at", "5")
    assert code == 1

    code, report, _ = run_cli("rectihull", "--vectors", "0,1;0,-1;1,0", "--at", "0.5,0.5")
    assert code == 1
    assert report["details"]["contains"] is False
    assert report["details"]["components"] == 1
    assert report["details"]["nested_in_convex_hull"] is True


def test_poly_file_with_comments(run_cli, tmp_path):
    path = tmp_path / "cubic.poly"
    path.write_text("# roots 2, i and -i\n(z1-2)*\n(z1^2+1)  # factored\n", encoding="utf-8")
    code, report, _ = run_cli("check-gl", "--poly-file", str(path))
    assert code == 0
    assert report["verdict"] == "pass"


@pytest.mark.parametrize("argv", [
    ["no-such-command"],
    ["roots", "--bogus"],
    ["roots"],
    ["roots", "--poly", "z1 +"],
    ["roots", "--poly", "z1", "--poly-file", "x.poly"],
    ["roots", "--poly", "z1*z2"],
    ["roots", "--poly", "5"],
    ["check-t2", "--poly", "z1", "--theta", "a,b"],
    ["diff", "--poly", "z1", "--k", "0"],
])
def test_usage_and_input_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_parse_errors_name_the_offset(run_cli):
    code, _, err = run_cli("roots", "--poly", "z1 +")
    assert code == 2
    assert "parse error" in err
    assert "offset 4" in err


def test_json_output_is_deterministic(capsys):
    argv = ["check-t2", "--poly", "z1*z2 + 1", "--trials", "300", "--seed", "4", "--format", "json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    second = capsys.readouterr().out
    assert first == second


def test_environment_defaults_are_echoed(run_cli, monkeypatch):
    monkeypatch.setattr("gausslab.config.GAUSSLAB_SEED", 42)
    monkeypatch.setattr("gausslab.config.GAUSSLAB_TOL", 1e-6)
    _, report, _ = run_cli("diff", "--poly", "z1^2")
    assert report["seed"] == 42
    assert report["tol"] == 1e-6


def test_sweep_exit_codes_follow_the_summary(run_cli, mocker):
    failing = SweepSummary("recti", 3, passed=2, failed=1, first_failure="case 2")
    run = mocker.patch("gausslab.services.sweep_service.run_suite", return_value=failing)
    code, report, _ = run_cli("sweep", "--suite", "recti", "--count", "3")
    assert code == 1
    assert report["details"]["suites"]["recti"]["first_failure"] == "case 2"
    run.assert_called_once_with("recti", 3, 0, 10000)

    mocker.patch("gausslab.services.sweep_service.run_suite",
                 return_value=SweepSummary("section", 5, degenerate=5))
    code, _, _ = run_cli("sweep", "--suite", "section")
    assert code == 3


def test_small_real_sweep(run_cli):
    code, report, _ = run_cli("sweep", "--suite", "quadratic", "--count", "30")
    assert code == 0
    assert report["details"]["suites"]["quadratic"]["fail"] == 0


def test_cubic_command_treats_roundoff_equal_abscissas_as_aligned(run_cli):
    code, report, _ = run_cli("example1", "--a", "0.30000000000000004", "--b", "1", "--c", "0.3")
    assert code == 0
    assert report["details"]["axis_aligned_roots"] is True
    assert report["details"]["contained"] is True


def test_example_commands_use_the_tolerance_flag(run_cli):
    code, report, _ = run_cli("example1", "--a", "0", "--b", "1", "--c", "0.2")
    assert code == 0
    assert report["details"]["contained"] is False

    code, report, _ = run_cli("example1", "--a", "0", "--b", "1", "--c", "0.2", "--tol", "0.5")
    assert code == 1
    assert report["details"]["contained"] is True
    assert report["tol"] == 0.5


def test_stability_command_certifies_at_the_tolerance_flag(run_cli, mocker):
    from gausslab.services import harness_service

    spy = mocker.spy(harness_service, "verify_derivative_stability")
    code, report, _ = run_cli("check-t2", "--poly", "z1*z2 + 1", "--trials", "1000", "--tol", "1e-6")
    assert code == 1
    assert spy.call_args.kwargs["cert_tol"] == 1e-6
    assert report["details"]["cert_tol"] == 1e-6
    assert report["details"]["screen_tol"] == 1e-6
