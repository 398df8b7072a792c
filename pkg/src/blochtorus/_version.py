TOOL_NAME = "blochtorus"
TOOL_VERSION = "0.1.0"
