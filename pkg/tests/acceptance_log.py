"""Shared record of acceptance-criterion outcomes, printed in the terminal summary."""

# criterion id -> (passed, detail)
RESULTS: dict[int, tuple[bool, str]] = {}
