import logging

logger = logging.getLogger("aiseta")
