# thetanorm/cli/ui.py
import sys

from thetanorm.utils.exceptions import UserAbortError


def confirm_proceed(prompt_message: str = "Proceed?") -> bool:
    """Asks the user for simple yes/no confirmation on stderr."""
    while True:
        try:
            sys.stderr.write(f"{prompt_message} [y/N] ")
            sys.stderr.flush()
            proceed = input().strip().lower()
            if proceed == 'y':
                return True
            elif proceed == 'n' or proceed == '':
                return False
            else:
                print("✖ Please enter 'y' or 'n'.", file=sys.stderr)
        except EOFError:
            print("\n✖ Input stream closed. Aborting.", file=sys.stderr)
            raise UserAbortError("User aborted via EOF.")
        except KeyboardInterrupt:
            print("\n✖ User interruption. Aborting.", file=sys.stderr)
            raise UserAbortError("User aborted via KeyboardInterrupt.")


def interactive() -> bool:
    """Whether stdin is a terminal we can prompt on."""
    return sys.stdin is not None and sys.stdin.isatty()
