"""
Main command-line entry point
Aggregates all subcommands into one click group and maps usage errors to
exit code 1 with error JSON on stderr
"""

import sys

import click

import config
from commands import (eigs_command, segment_command, denoise_command, noise_command, phantom_command,
                      oracle_command)
from commands.runtime import EXIT_INPUT, emit_error
from logging_config import get_logger


class EigensegGroup(click.Group):
    """click group whose usage errors follow the same exit-code and JSON contract as the commands"""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args=args, prog_name=prog_name, complete_var=complete_var,
                              standalone_mode=False, **extra)
        except click.ClickException as e:
            get_logger().error('usage: %s', e.format_message())
            emit_error('usage', e.format_message())
            sys.exit(EXIT_INPUT)
        except click.exceptions.Abort:
            emit_error('aborted', 'aborted')
            sys.exit(EXIT_INPUT)
        sys.exit(rv if isinstance(rv, int) else 0)


@click.group(cls=EigensegGroup)
@click.option('--threads', type=click.IntRange(min=1), envvar='AES_THREADS', default=config.THREADS,
              show_default=True, help='Matvec worker threads (env AES_THREADS)')
@click.option('--log-dir', type=click.Path(file_okay=False), default=None,
              help='Directory for runs.log (env AES_LOG_DIR)')
@click.pass_context
def cli(ctx, threads, log_dir):
    """Adaptive-eigenspace segmentation and denoising"""
    config.THREADS = threads
    logger = get_logger(log_dir=log_dir, command=ctx.invoked_subcommand)
    logger.info('start: threads=%d, argv=%s', threads, ' '.join(sys.argv[1:]))


# Register commands
cli.add_command(eigs_command)
cli.add_command(segment_command)
cli.add_command(denoise_command)
cli.add_command(noise_command)
cli.add_command(phantom_command)
cli.add_command(oracle_command)

if __name__ == '__main__':
    cli()
