"""
Management command exposing the chainmail library:

    python manage.py chainmail <command> [flags] <paths...>

Exit status 0 means success or the checked property holds, 1 that it fails
(or theorem hypotheses are unmet), 2 that the input was invalid.
"""
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from cli.batch import run_batch
from cli.generator import Profile
from cli.runner import COMMANDS, RunOptions
from core.responses import EXIT_INVALID_INPUT
from graphs.models import MinorKind
from surgery.models import CrossingAction


class Command(BaseCommand):
    help = 'Chainmail graph invariants, certificates and link diagrams'

    def add_arguments(self, parser):
        parser.add_argument('command', choices=COMMANDS, help='Operation to run')
        parser.add_argument('paths', nargs='*', help='Input .cmg.json graph files (certificate JSON for verify)')
        parser.add_argument('--format', choices=('text', 'json'), default='text')
        parser.add_argument('--out', help='Write the output to this file (single input only)')
        parser.add_argument('--jobs', type=int, default=None,
                            help='Worker threads for several inputs (default CHAINMAIL_DEFAULT_JOBS)')
        parser.add_argument('--edge', help='Edge id for minor, dc-check and twist')
        parser.add_argument('--kind', choices=[k.value for k in MinorKind], help='Minor kind')
        parser.add_argument('--action', choices=[a.value for a in CrossingAction], help='Crossing-loop action')
        parser.add_argument('--cap', type=int, default=None, help='Edge cap for obstruct')
        parser.add_argument('--medial', action='store_true', help='pd/svg: use the medial link K_G')
        parser.add_argument('--cover-check', action='store_true', help='medial: check the balanced cover identity')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--profile', choices=[p.value for p in Profile], default=Profile.THEOREM_ALTERNATING.value)
        parser.add_argument('--vertices', help="Vertex count range 'lo:hi'")
        parser.add_argument('--edges', help="Edge count range 'lo:hi'")
        parser.add_argument('--vertex-weights', help="Vertex weight range 'lo:hi'")
        parser.add_argument('--edge-weights', help="Edge weight range 'lo:hi'")
        parser.add_argument('--coefficients', help="Crossing-loop c range 'lo:hi' (coefficient -c)")

    def handle(self, *args, **options):
        command = options['command']
        paths = options['paths']
        if command == 'random' and paths:
            raise CommandError('random takes no input files', returncode=EXIT_INVALID_INPUT)
        if command != 'random' and not paths:
            raise CommandError(f"{command} needs at least one input file", returncode=EXIT_INVALID_INPUT)
        if options['out'] and len(paths) > 1:
            raise CommandError('--out needs a single input file', returncode=EXIT_INVALID_INPUT)
        jobs = options['jobs'] or getattr(settings, 'CHAINMAIL_DEFAULT_JOBS', 1)
        if jobs < 1:
            raise CommandError('--jobs must be at least 1', returncode=EXIT_INVALID_INPUT)

        run_options = RunOptions(
            format=options['format'],
            edge=options['edge'],
            kind=options['kind'],
            action=options['action'],
            cap=options['cap'],
            medial=options['medial'],
            cover_check=options['cover_check'],
            seed=options['seed'],
            profile=options['profile'],
            vertices=options['vertices'],
            edges=options['edges'],
            vertex_weights=options['vertex_weights'],
            edge_weights=options['edge_weights'],
            coefficients=options['coefficients'],
        )
        batch = run_batch(command, run_options, paths, jobs=jobs)

        if options['out']:
            try:
                Path(options['out']).write_text(batch.stdout, encoding='utf-8')
            except OSError as exc:
                raise CommandError(f"cannot write {options['out']}: {exc}", returncode=EXIT_INVALID_INPUT)
        else:
            self.stdout.write(batch.stdout, ending='')

        problem = batch.first_problem()
        if problem is not None:
            raise CommandError(problem.message, returncode=batch.exit_code)
