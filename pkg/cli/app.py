from __future__ import annotations

from typing import Optional

import typer
from dotenv import load_dotenv

from .common import configure_logging, console
from .i18n import SUPPORTED, get_lang, set_lang, t
from .subapps.sim import sim_app
from .subapps.wind import wind_app

load_dotenv()

app = typer.Typer(help="WECS wind energy conversion system simulator", no_args_is_help=True)
app.add_typer(sim_app)
app.add_typer(wind_app)


@app.callback()
def main() -> None:
    configure_logging("cli")


@app.command("lang", help="Show or persist the CLI language (en/ro)")
def lang(choice: Optional[str] = typer.Argument(None, help="en or ro")) -> None:
    if choice is None:
        console().print(t("msgs.current_lang", lang=get_lang()))
        return
    if choice not in SUPPORTED:
        raise typer.BadParameter(f"choose one of {', '.join(SUPPORTED)}")
    set_lang(choice)
    console().print(t("msgs.selected_lang", lang=choice))


if __name__ == "__main__":
    app()
