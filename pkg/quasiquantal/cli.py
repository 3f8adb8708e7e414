import argparse
import os
import sys

from .clebsch import class_table
from .errors import ScenarioError, QuasiquantalError
from .scenario import load_scenario, run, verify
from .sweep import sweep


SCENARIO_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'scenarios')


def bundled_scenarios():
    '''name -> path of the scenario files shipped with the package.'''
    if not os.path.isdir(SCENARIO_DIR):
        return {}
    return {os.path.splitext(f)[0]: os.path.join(SCENARIO_DIR, f)
            for f in sorted(os.listdir(SCENARIO_DIR)) if f.endswith('.json')}


def resolve_scenario(name_or_path):
    '''A path to a scenario file, or the name of a bundled scenario.'''
    if os.path.isfile(name_or_path):
        return name_or_path
    bundled = bundled_scenarios()
    if name_or_path in bundled:
        return bundled[name_or_path]
    raise ScenarioError(f"no scenario file or bundled scenario called '{name_or_path}'",
                        valid=sorted(bundled))


## COMMANDS ===================================================================
def _cmd_run(args):
    report = run(load_scenario(resolve_scenario(args.scenario)), out=args.out, plot=args.plot)
    print(f"Report written to {report.files['report']}")
    return report.exit_code


def _cmd_list(args):
    for name, path in bundled_scenarios().items():
        print(f'{name}\t{path}')
    return 0


def _cmd_clebsch(args):
    table = class_table(n_min=args.n_min, n_max=args.n_max, include_maximal=not args.no_maximal)
    sys.stdout.write(table.to_csv(index=False))
    return 0


def _cmd_verify(args):
    return verify(list_only=args.list, caustic_threshold=args.caustic_threshold,
                  criteria=args.criteria)


def _cmd_sweep(args):
    _, _, exit_code = sweep(resolve_scenario(args.scenario), args.matrix, out=args.out,
                            plot=args.plot)
    return exit_code
## [END] COMMANDS =============================================================


def build_parser():
    parser = argparse.ArgumentParser(
        prog='quasiquantal',
        description='Phase-space, projected and wave-function mechanics with cross-checks')
    commands = parser.add_subparsers(dest='command', required=True)

    p = commands.add_parser('run', help='run a scenario and write its report')
    p.add_argument('scenario', help='scenario JSON file or bundled scenario name')
    p.add_argument('--out', default=None, help='output root directory')
    p.add_argument('--plot', action='store_true', help='write the 1D density figure')
    p.set_defaults(func=_cmd_run)

    p = commands.add_parser('list-scenarios', help='list the bundled scenarios')
    p.set_defaults(func=_cmd_list)

    p = commands.add_parser('clebsch-table', help='print Clebsch class solutions as CSV')
    p.add_argument('--n-max', type=int, required=True)
    p.add_argument('--n-min', type=int, default=1)
    p.add_argument('--no-maximal', action='store_true', help='leave out the m = 0 solutions')
    p.set_defaults(func=_cmd_clebsch)

    p = commands.add_parser('verify', help='run the acceptance criteria')
    p.add_argument('--list', action='store_true', help='list the criteria without running them')
    p.add_argument('--caustic-threshold', type=float, default=None)
    p.add_argument('--criteria', type=int, nargs='+', default=None, help='criterion numbers')
    p.set_defaults(func=_cmd_verify)

    p = commands.add_parser('sweep', help='run a scenario over a matrix of values')
    p.add_argument('scenario', help='scenario JSON file or bundled scenario name')
    p.add_argument('--matrix', required=True, help='sweep matrix JSON file')
    p.add_argument('--out', default=None)
    p.add_argument('--plot', action='store_true')
    p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None):
    '''
    Entry point. Exit codes: 0 pass, 1 check failure, 2 invalid input or
    execution error.
    '''
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f'ERROR: {exc}', file=sys.stderr)
        return 2
    except (QuasiquantalError, KeyError) as exc:
        print(f'ERROR: {type(exc).__name__}: {exc}', file=sys.stderr)
        return 2


if __name__ == '__main__':
    sys.exit(main())
