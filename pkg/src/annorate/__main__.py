"""Allow ``python -m annorate`` as an alternative to the console script."""

from .cli import run

run()
