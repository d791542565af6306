#!/usr/bin/env python3
"""
Write a seeded instance suite to a directory.

Instances cycle through the requested kinds with n running over
[n_min, n_max]; identical arguments give byte-identical files.
"""
import argparse
import os
import sys

# Add the project root to the Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from stpath import create_app
from stpath.services.errors import InputError
from stpath.services.instance_service import KINDS


def main():
    """Generate the suite."""
    parser = argparse.ArgumentParser(description='Seeded instance suite generator')
    parser.add_argument('directory', help='Output directory')
    parser.add_argument('--seeds', type=int, default=200, help='Number of instances')
    parser.add_argument('--n-min', type=int, default=5)
    parser.add_argument('--n-max', type=int, default=12)
    parser.add_argument('--kind', action='append', choices=KINDS, help='Instance kind (repeatable)')
    args = parser.parse_args()

    kinds = args.kind or ['euclidean', 'graph-metric']
    app = create_app(os.environ.get('APP_ENV', 'default'))
    service = app.instance_service()
    repository = app.artifact_repository(base_dir=args.directory)
    try:
        for seed in range(args.seeds):
            n = args.n_min + seed % (args.n_max - args.n_min + 1)
            kind = kinds[seed % len(kinds)]
            instance = service.gen_random_metric(n, seed, kind)
            repository.write_json(f"{instance.name}.json", service.dump_instance(instance))
        print(f"Wrote {args.seeds} instances to {args.directory}")
    except InputError as e:
        print(f"Error generating suite: {e}")
        sys.exit(app.exit_code('INPUT_ERROR'))


if __name__ == '__main__':
    main()
