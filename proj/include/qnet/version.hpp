#pragma once

#define QNET_VERSION "0.1.0"
