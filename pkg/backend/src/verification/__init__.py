"""
Verification suites, reports and the runner behind the CLI and the API.
"""
