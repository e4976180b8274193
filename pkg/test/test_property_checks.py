# coding=utf-8

import json
import os
import sys
import tempfile
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from benchmark_fbe import main as bench_main
from property_checks import SUITES, all_passed, run_suites, summarize
from test.commons import print_separator


def test_quick_suites():
    print('> testing quick property suites ...')
    results = run_suites(quick=True, seed=3)
    assert [result.name for result in results] == list(SUITES)
    for result in results:
        print('   {:<22s} worst {:.3e} (limit {:.1e}) over {} checks'.format(
            result.name, result.worst, result.limit, result.checked))
        assert result.passed, result
        assert result.checked > 0
    assert all_passed(results)

    summary = summarize(results)
    assert set(summary) == set(SUITES)
    assert json.loads(json.dumps(summary)) == summary
    print('>> passed the test :-)')


def test_suite_selection():
    print('> testing suite selection ...')
    results = run_suites(['curvature', 'prox'], quick=True)
    assert [result.name for result in results] == ['curvature', 'prox']
    assert [result.name for result in run_suites([], quick=True)] == list(SUITES)
    try:
        run_suites(['convexity'])
        raise AssertionError('accepted an unknown suite')
    except ValueError:
        pass

    with tempfile.TemporaryDirectory() as directory:
        assert bench_main(['check', '--quick', '--suites', 'sandwich', '--out', directory]) == 0
        with open(os.path.join(directory, 'check.json')) as file:
            assert json.load(file)['sandwich']['passed']
    print('>> passed the test :-)')


def main():
    print_separator('test property suites')
    test_quick_suites()
    test_suite_selection()


if __name__ == '__main__':
    main()
