import json

import numpy as np
import pytest

from anash.cli import main
from anash.game import BimatrixGame, MixedStrategy, StrategyProfile
from anash.gameio import load_game, save_game, save_profile
from anash.instances import InstanceSpec, generate


@pytest.fixture()
def game_file(tmp_path):
    game = generate(InstanceSpec("uniform-random", n=3, seed=4))
    path = tmp_path / "game.txt"
    save_game(game, path)
    return path, game


def test_solve_prints_summary(game_file, capsys):
    path, _ = game_file
    code = main(["solve", str(path), "--delta", "0.05"])
    out = capsys.readouterr().out
    assert code == 0
    assert "n=3 delta=0.05" in out
    assert "row strategy:" in out
    assert "max regret:" in out


def test_solve_json_trace(game_file, capsys):
    path, _ = game_file
    code = main(["solve", str(path), "--delta", "0.05", "--json"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["stationary"] is True
    assert doc["achieved_epsilon"] <= 1.0 / 3.0 + 0.05 + 1e-6
    assert len(doc["row_strategy"]) == 3


def test_solve_missing_file(tmp_path, capsys):
    code = main(["solve", str(tmp_path / "nope.txt")])
    assert code == 3
    assert "error:" in capsys.readouterr().err


def test_gen_writes_loadable_file(tmp_path, capsys):
    out = tmp_path / "g.txt"
    code = main(["gen", "win-lose", "4", "9", "-o", str(out),
                 "--win-prob", "0.3"])
    assert code == 0
    game = load_game(out)
    expected = generate(InstanceSpec("win-lose", n=4, seed=9,
                                     extra={"p": 0.3}))
    assert np.array_equal(game.R, expected.R)
    assert np.array_equal(game.C, expected.C)


def test_gen_win_prob_needs_win_lose(tmp_path, capsys):
    code = main(["gen", "uniform-random", "3", "0",
                 "-o", str(tmp_path / "g.txt"), "--win-prob", "0.5"])
    assert code == 2
    assert "win-prob" in capsys.readouterr().err


def test_batch_roundtrip(tmp_path, capsys):
    specs = [
        {"family": "uniform-random", "n": 3, "seed": 0},
        {"family": "constant-sum", "n": 3, "seed": 1},
    ]
    spec_path = tmp_path / "specs.json"
    spec_path.write_text(json.dumps(specs))
    out = tmp_path / "runs.csv"
    code = main(["batch", str(spec_path), "-o", str(out),
                 "--delta", "0.05"])
    assert code == 0
    assert "solved 2/2" in capsys.readouterr().out
    assert out.read_text().startswith("#anash-v1\n")


def test_batch_rejects_bad_specs(tmp_path, capsys):
    spec_path = tmp_path / "specs.json"
    spec_path.write_text('{"family": "uniform-random"}')
    out = tmp_path / "runs.csv"
    code = main(["batch", str(spec_path), "-o", str(out)])
    assert code == 3
    assert "JSON list" in capsys.readouterr().err


def test_verify_accepts_equilibrium(tmp_path, capsys):
    R = np.array([[1.0, 0.0], [0.0, 1.0]])
    game_path = tmp_path / "mp.txt"
    save_game(BimatrixGame(R, 1.0 - R), game_path)
    profile_path = tmp_path / "p.txt"
    save_profile(
        StrategyProfile(MixedStrategy.uniform(2), MixedStrategy.uniform(2)),
        profile_path,
    )
    code = main(["verify", str(game_path), str(profile_path),
                 "--epsilon", "1e-9"])
    out = capsys.readouterr().out
    assert code == 0
    assert "certified" in out


def test_verify_rejects_bad_profile(tmp_path, capsys):
    R = np.array([[1.0, 0.0], [0.0, 1.0]])
    game_path = tmp_path / "mp.txt"
    save_game(BimatrixGame(R, 1.0 - R), game_path)
    profile_path = tmp_path / "p.txt"
    save_profile(
        StrategyProfile(MixedStrategy.pure(0, 2), MixedStrategy.pure(0, 2)),
        profile_path,
    )
    code = main(["verify", str(game_path), str(profile_path),
                 "--epsilon", "0.5"])
    assert code == 4
    assert "NOT within" in capsys.readouterr().out


def test_oracle_lists_equilibria(tmp_path, capsys):
    R = np.array([[0.5, 0.0], [0.0, 1.0]])
    C = np.array([[1.0, 0.0], [0.0, 0.5]])
    path = tmp_path / "g.txt"
    save_game(BimatrixGame(R, C), path)
    code = main(["oracle", str(path)])
    out = capsys.readouterr().out
    assert code == 0
    assert "3 exact equilibria" in out


def test_oracle_size_cap(tmp_path, capsys):
    game = generate(InstanceSpec("uniform-random", n=6, seed=0))
    path = tmp_path / "g.txt"
    save_game(game, path)
    code = main(["oracle", str(path)])
    assert code == 2
    assert "n <= 5" in capsys.readouterr().err


def test_no_command_usage():
    assert main([]) == 2
