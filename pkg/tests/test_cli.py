import json
import subprocess
import sys

import pytest

from ffsimplex.cli import main
from ffsimplex.report import clean, make_report, render


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_sphere_command(capsys):
    code, out = run(capsys, 'sphere', '--q', '3', '--d', '3', '--a', '1', '--formula')
    rep = json.loads(out)
    assert code == 0
    assert rep['metrics'] == {'size_formula': 6, 'size_enumerated': 6, 'agree': True}


def test_spectrum_dense_agrees(capsys):
    code, out = run(capsys, 'spectrum', '--q', '3', '--d', '2', '--a', '1', '--dense')
    assert code == 0 and json.loads(out)['metrics']['agree'] is True


def test_failed_check_exits_one(capsys):
    code, out = run(capsys, 'spectrum', '--q', '7', '--d', '4', '--a', '0')
    assert code == 1 and json.loads(out)['flags']['ramanujan_bound'] is False


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(['bogus'])
    assert exc.value.code == 2
    assert main(['census', '--q', '4', '--k', '2']) == 2
    assert main(['census', '--q', '3', '--k', '3', '--cap', '100']) == 2


def test_reports_are_byte_identical(capsys):
    argv = ['census', '--q', '3', '--k', '3', '--density', '0.3', '--mode', 'sample', '--samples', '20000',
            '--seed', '5', '--workers', '2']
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b
    rep = json.loads(a)
    assert rep['config']['seed'] == 5 and rep['config']['workers'] == 2
    assert rep['metrics']['certified_lower_bound'] is True


def test_timing_flag(capsys):
    _, out = run(capsys, 'field-check', '--q', '9')
    assert 'wall_time' not in json.loads(out)
    _, out = run(capsys, 'field-check', '--q', '9', '--timing')
    assert json.loads(out)['wall_time'] >= 0


def test_csv_and_out_file(tmp_path, capsys):
    path = tmp_path / 'r.csv'
    assert main(['scheme', '--q', '3', '--format', 'csv', '--out', str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == 'key,value'
    assert 'metrics.omega_size,45' in lines


def test_copies_from_pattern_file(tmp_path, capsys):
    pattern = tmp_path / 'tri.json'
    pattern.write_text(json.dumps({'s': 3, 'edges': [[0, 1, 1], [0, 2, 1], [1, 2, 1]]}))
    code, out = run(capsys, 'copies', '--q', '3', '--d', '2', '--pattern', str(pattern))
    rep = json.loads(out)
    assert code == 0 and rep['metrics']['exact_count'] > 0 and rep['metrics']['automorphisms'] == 6


@pytest.mark.parametrize('argv', [
    ['mixing', '--q', '5', '--d', '2', '--a', '1', '--trials', '10'],
    ['stars', '--q', '3', '--d', '3', '--type', '1,2'],
    ['congruence-check', '--q', '3', '--d', '2', '--trials', '20'],
    ['pipeline', '--q', '3', '--type', '1,1,1'],
    ['main-theorem', '--q', '3', '--k', '3', '--density', '1', '--samples', '20000'],
    ['accept', '--profile', 'quick', '--only', '1,2', '--quiet'],
])
def test_commands_pass(argv, capsys):
    code, out = run(capsys, *argv)
    assert code == 0 and json.loads(out)['passed'] is True


def test_large_integers_become_strings():
    rep = make_report('x', {}, {'big': 2 ** 60, 'small': 7, 'r': 1 / 3}, {'ok': True})
    assert rep['metrics'] == {'big': str(2 ** 60), 'small': 7, 'r': 0.333333333333}
    assert clean(float('nan')) is None
    assert json.loads(render(rep))['passed'] is True


def test_module_entry_point():
    out = subprocess.run([sys.executable, '-m', 'ffsimplex', 'sphere', '--q', '5', '--d', '2', '--a', '0',
                          '--formula'], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)['flags']['agree']
