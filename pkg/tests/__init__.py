"""Test suite for dynamic orchestrator MCP"""