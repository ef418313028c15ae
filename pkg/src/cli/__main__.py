"""``python -m src.cli`` / ``socnet`` console script."""

from src.kebab_module_loader import load_module


def main() -> None:
    load_module("src.cli.socnet-cli").main()


if __name__ == "__main__":
    main()
