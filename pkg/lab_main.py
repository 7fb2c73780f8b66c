import sys

from dotenv import load_dotenv

load_dotenv()

from src.cli.main import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
