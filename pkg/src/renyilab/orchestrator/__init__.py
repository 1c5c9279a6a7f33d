"""Campaign runners, the property suite, report writers and the shared work queue."""
