"""declbot: a deterministic 2D multi-robot labyrinth simulator whose robots
are driven entirely by declarative rule programs (LogiCore), with a CLI, a
control service, and a browser cockpit."""

__version__ = "0.1.0"
