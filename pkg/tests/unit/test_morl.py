# pylint: disable=missing-docstring
import json
import os
import pytest

from morl.morl import PARSER, __version__, main, printHelpAndExit
import morl.config as config


def test_version():
    assert __version__


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as pytest_wrapped_excep:
        main(["--version"])
    assert pytest_wrapped_excep.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_no_command():
    with pytest.raises(SystemExit) as pytest_wrapped_excep:
        main([])
    assert pytest_wrapped_excep.type == SystemExit
    assert pytest_wrapped_excep.value.code == config.ERR_CODE_NO_COMMAND


def test_print_help():
    with pytest.raises(SystemExit) as pytest_wrapped_excep:
        printHelpAndExit()
    assert pytest_wrapped_excep.value.code == config.ERR_CODE_NO_COMMAND


def test_oracle_csv(capsys):
    main(["oracle", "--env", "original", "--threshold", "0.88"])
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "policy,mean_obj1,mean_obj2,meets_threshold,is_ser_optimal"
    assert len(lines) == 10
    optimal = [line.split(",")[0] for line in lines[1:] if line.endswith(",true")]
    assert optimal == ["DI"]


def test_oracle_default_threshold(capsys):
    main(["oracle", "--env", "id"])
    lines = capsys.readouterr().out.splitlines()
    assert [line.split(",")[0] for line in lines[1:] if line.endswith(",true")] == ["ID"]


def test_oracle_json(capsys):
    main(["oracle", "--env", "mr", "--json"])
    document = json.loads(capsys.readouterr().out)
    assert document["thresholds"] == [0.76]
    assert len(document["policies"]) == 9


def test_oracle_unknown_environment(capsys):
    with pytest.raises(SystemExit) as pytest_wrapped_excep:
        main(["oracle", "--env", "nowhere"])
    assert pytest_wrapped_excep.value.code == config.ERR_CODE_SPEC
    assert "UNKNOWN_ENVIRONMENT" in capsys.readouterr().err


def test_oracle_invalid_file(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{")
    with pytest.raises(SystemExit) as pytest_wrapped_excep:
        main(["oracle", "--env", str(path)])
    assert pytest_wrapped_excep.value.code == config.ERR_CODE_SPEC
    assert "PARSE_ERROR" in capsys.readouterr().err


def test_run_and_summarize(tmp_path, capsys):
    out = str(tmp_path / "run")
    main(["run", "--agent", "moss", "--env", "original", "--trials", "2",
          "--episodes", "25", "--seed", "3", "--alpha-schedule", "linear:0.01:0",
          "--out", out])
    assert os.path.isfile(os.path.join(out, config.SUMMARY_FILE))
    assert os.path.isfile(os.path.join(out, config.CHART_FILE_PATTERN.format(1)))
    ranOutput = capsys.readouterr().out
    main(["summarize", "--dir", out])
    assert capsys.readouterr().out == ranOutput


def test_run_from_config_with_overrides(tmp_path):
    configFile = tmp_path / "experiment.json"
    configFile.write_text(json.dumps({"environment": "mr", "agent": "baseline",
                                      "trials": 50, "episodes_per_trial": 10,
                                      "output_dir": str(tmp_path / "ignored")}))
    out = tmp_path / "out"
    main(["run", "--config", str(configFile), "--trials", "1", "--out", str(out)])
    with open(str(out / config.SUMMARY_FILE)) as fIn:
        document = json.load(fIn)
    assert document["trials"] == 1
    assert document["config"]["environment"] == "mr"
    assert document["config"]["thresholds"] == [0.76]
    assert not (tmp_path / "ignored").exists()


def test_run_with_q_log(tmp_path):
    out = tmp_path / "out"
    main(["run", "--agent", "options", "--trials", "1", "--episodes", "5",
          "--out", str(out), "--log-q"])
    assert (out / config.QVALUES_FILE_PATTERN.format(0)).is_file()


def test_run_unknown_agent(tmp_path):
    with pytest.raises(SystemExit) as pytest_wrapped_excep:
        main(["run", "--agent", "sarsa", "--out", str(tmp_path)])
    assert pytest_wrapped_excep.value.code == config.ERR_CODE_CONFIG


def test_run_bad_schedule(tmp_path):
    with pytest.raises(SystemExit) as pytest_wrapped_excep:
        main(["run", "--alpha-schedule", "fast", "--out", str(tmp_path)])
    assert pytest_wrapped_excep.value.code == config.ERR_CODE_CONFIG


def test_summarize_empty_dir(tmp_path):
    with pytest.raises(SystemExit) as pytest_wrapped_excep:
        main(["summarize", "--dir", str(tmp_path)])
    assert pytest_wrapped_excep.value.code == config.ERR_CODE_MISSING_ARTIFACTS


def test_envs(capsys):
    main(["envs"])
    lines = capsys.readouterr().out.splitlines()
    assert [line.split("\t")[0] for line in lines] == ["3st", "3st-delayed", "id", "mr",
                                                       "original"]
    assert "thresholds=0.76" in lines[0]


def test_run_uses_every_cpu_by_default():
    args = PARSER.parse_args(["run"])
    assert args.workers == config.DEFAULT_WORKERS >= 1
