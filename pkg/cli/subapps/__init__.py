"Typer command groups for the WECS CLI."
